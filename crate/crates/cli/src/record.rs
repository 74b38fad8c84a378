use serde::Serialize;
use symkrylov::SolveReport;

/// One CSV row per solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub id: usize,
    pub n: usize,
    pub variant: String,
    pub compatible: Option<bool>,
    pub iterations: usize,
    pub transfer_iteration: Option<usize>,
    pub stop_reason: String,
    pub phi: f64,
    pub psi: f64,
    pub chi: f64,
    pub anorm: f64,
    pub acond: f64,
    /// `‖x − x†‖/‖x†‖` against the truncated-SVD solution.
    pub relerr: Option<f64>,
    pub wall_time_s: Option<f64>,
}

impl RunRecord {
    pub fn from_report(id: usize, n: usize, variant: &str, report: &SolveReport) -> Self {
        RunRecord {
            id,
            n,
            variant: variant.to_string(),
            compatible: None,
            iterations: report.iterations,
            transfer_iteration: report.transfer_iteration,
            stop_reason: report.reason.name().to_string(),
            phi: report.phi,
            psi: report.psi,
            chi: report.chi,
            anorm: report.anorm,
            acond: report.acond,
            relerr: None,
            wall_time_s: None,
        }
    }
}

pub const CSV_HEADER: &str = "id,n,variant,compatible,iterations,transfer_iteration,stop_reason,phi,psi,chi,anorm,acond,relerr,wall_time_s";

/// Serializes records with a fixed header, written even when empty.
pub fn write_csv<W: std::io::Write>(out: W, records: &[RunRecord]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
