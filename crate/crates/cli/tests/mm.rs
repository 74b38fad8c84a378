use proptest::prelude::*;
use symkrylov::oracle::Suite;
use symkrylov::{Scalar, SymmetryClass};
use symkrylov_cli::mm::{parse_matrix_file, MmError, Qualifier};
use symkrylov_cli::{parse_matrix_market, parse_vector, write_matrix_market, write_vector};

fn c(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

#[test]
fn skew_file_is_mirrored_with_negation() {
    let text = "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 -5\n";
    let (a, class) = parse_matrix_market(text).unwrap();
    assert_eq!(class, Some(SymmetryClass::SkewSymmetric));
    let d = a.to_dense();
    assert_eq!(
        d,
        vec![vec![c(0., 0.), c(5., 0.)], vec![c(-5., 0.), c(0., 0.)]]
    );
}

#[test]
fn complex_symmetric_lower_triangle_is_expanded() {
    let text = "%%MatrixMarket matrix coordinate complex symmetric\n% comment\n3 3 4\n1 1 1 2\n2 1 0.5 -1\n3 2 3 0\n3 3 0 1\n";
    let (a, class) = parse_matrix_market(text).unwrap();
    assert_eq!(class, Some(SymmetryClass::ComplexSymmetric));
    assert_eq!(a.nnz(), 6);
    let d = a.to_dense();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(d[i][j], d[j][i]);
        }
    }
    assert_eq!(d[0][1], c(0.5, -1.0));
    assert_eq!(d[1][2], c(3.0, 0.0));
}

#[test]
fn hermitian_file_is_mirrored_with_conjugation() {
    let text =
        "%%MatrixMarket matrix coordinate complex hermitian\n2 2 3\n1 1 2 0\n2 1 1 1\n2 2 -1 0\n";
    let (a, class) = parse_matrix_market(text).unwrap();
    assert_eq!(class, Some(SymmetryClass::Hermitian));
    assert_eq!(a.get(0, 1), c(1., -1.));
    assert_eq!(a.get(1, 0), c(1., 1.));
}

#[test]
fn malformed_files_are_rejected() {
    let bad_diag = "%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n1 1 1 1\n";
    assert!(matches!(
        parse_matrix_market(bad_diag),
        Err(MmError::HermitianDiagonal { line: 3 })
    ));

    let skew_diag = "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n1 1 3\n";
    assert!(matches!(
        parse_matrix_market(skew_diag),
        Err(MmError::SkewDiagonal { .. })
    ));

    let header = "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n";
    assert!(matches!(
        parse_matrix_market(header),
        Err(MmError::Header(_))
    ));
    assert!(matches!(
        parse_matrix_market("not a header\n"),
        Err(MmError::Header(_))
    ));

    let range = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n";
    assert!(matches!(
        parse_matrix_market(range),
        Err(MmError::IndexOutOfRange { row: 3, .. })
    ));

    let rect = "%%MatrixMarket matrix coordinate real general\n2 3 0\n";
    assert!(matches!(
        parse_matrix_market(rect),
        Err(MmError::NotSquare { rows: 2, cols: 3 })
    ));

    let count = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n";
    assert!(matches!(
        parse_matrix_market(count),
        Err(MmError::EntryCount {
            expected: 2,
            found: 1
        })
    ));

    let upper = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1\n";
    assert!(matches!(
        parse_matrix_market(upper),
        Err(MmError::UpperTriangle { .. })
    ));

    let missing_im = "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1\n";
    assert!(matches!(
        parse_matrix_market(missing_im),
        Err(MmError::Syntax { .. })
    ));
}

#[test]
fn general_and_complex_skew_files_carry_no_class() {
    let text = "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 0 1\n";
    assert_eq!(parse_matrix_market(text).unwrap().1, None);
    let text = "%%MatrixMarket matrix coordinate complex skew-symmetric\n2 2 1\n2 1 0 1\n";
    assert_eq!(parse_matrix_market(text).unwrap().1, None);
}

#[test]
fn writer_falls_back_to_general_without_exact_structure() {
    let (a, _) = parse_matrix_market(
        "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1\n2 1 1.0000001\n",
    )
    .unwrap();
    let text = write_matrix_market(&a, Some(SymmetryClass::ComplexSymmetric));
    assert!(text.starts_with("%%MatrixMarket matrix coordinate real general"));
    assert_eq!(parse_matrix_market(&text).unwrap().0, a);
}

#[test]
fn vectors_round_trip() {
    let b = vec![c(1.0, -0.0), c(1e-300, 3.5), c(-2.25, f64::MIN_POSITIVE)];
    let back = parse_vector(&write_vector(&b)).unwrap();
    assert_eq!(back, b);
    let r = vec![c(0.1, 0.0), c(-7.0, 0.0)];
    let text = write_vector(&r);
    assert!(text.starts_with("%%MatrixMarket matrix array real general\n2 1\n"));
    assert_eq!(parse_vector(&text).unwrap(), r);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_problems_round_trip_exactly(
        suite in prop_oneof![
            Just(Suite::CsImaginary),
            Just(Suite::CsSpread),
            Just(Suite::SkewSymmetric),
            Just(Suite::SkewHermitian)
        ],
        n in 1usize..12,
        seed in any::<u64>(),
    ) {
        let p = suite.generate(n, n.saturating_sub(1), seed, seed % 2 == 0);
        let text = write_matrix_market(&p.a, Some(p.variant));
        let file = parse_matrix_file(&text).unwrap();
        prop_assert_eq!(&file.matrix, &p.a);
        let expected = match p.variant {
            SymmetryClass::ComplexSymmetric => Qualifier::Symmetric,
            SymmetryClass::SkewSymmetric => Qualifier::SkewSymmetric,
            _ => Qualifier::General,
        };
        prop_assert_eq!(file.qualifier, expected);
        let entries: Vec<_> = file.matrix.triplets().collect();
        let original: Vec<_> = p.a.triplets().collect();
        for ((i1, j1, v1), (i2, j2, v2)) in entries.iter().zip(&original) {
            prop_assert_eq!((i1, j1), (i2, j2));
            prop_assert_eq!(v1.re.to_bits(), v2.re.to_bits());
            prop_assert_eq!(v1.im.to_bits(), v2.im.to_bits());
        }
        prop_assert_eq!(parse_vector(&write_vector(&p.b)).unwrap(), p.b.into_inner());
    }
}
