use stabtherm::model_io::{
    build_ising, build_toric, builtin_ordering, parse_model, parse_ordering, same_model,
    serialize_model, serialize_ordering,
};
use stabtherm::{Error, Rational};

#[test]
fn toric_counts() {
    for l in 2..=5 {
        let m = build_toric(l).unwrap();
        assert_eq!(m.n_qubits(), 2 * l * l);
        assert_eq!(m.n_generators(), 2 * l * l);
        // One dependency among stars and one among plaquettes.
        assert_eq!(m.rank(), 2 * l * l - 2);
        assert!(m.generators().iter().all(|g| g.weight() == 4 || l == 2));
    }
}

#[test]
fn ising_counts() {
    let chain = build_ising(1, 5, false).unwrap();
    assert_eq!((chain.n_qubits(), chain.n_generators(), chain.rank()), (5, 4, 4));
    let ring = build_ising(1, 5, true).unwrap();
    assert_eq!((ring.n_generators(), ring.rank()), (5, 4));
    let torus = build_ising(2, 4, true).unwrap();
    assert_eq!((torus.n_qubits(), torus.n_generators(), torus.rank()), (16, 32, 15));
}

#[test]
fn file_roundtrip_through_disk() {
    let dir = std::env::temp_dir().join(format!("stabtherm-models-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("toric3.stab");
    let m = build_toric(3).unwrap();
    std::fs::write(&path, serialize_model(&m)).unwrap();
    let back = parse_model(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(same_model(&m, &back));
    assert_eq!(back.name(), m.name());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ordering_roundtrip() {
    let m = build_toric(2).unwrap();
    let o = builtin_ordering("toric-zx", &m).unwrap();
    let back = parse_ordering(&serialize_ordering(&o), &m).unwrap();
    assert_eq!(back, o);
}

#[test]
fn rejects_bad_models() {
    let anticommuting = "qubits 1\nterm 1 X\nterm 1 Z\n";
    assert!(matches!(parse_model(anticommuting), Err(Error::Validation(_))));
    let minus_identity = "qubits 2\nterm 1 XX\nterm 1 ZZ\nterm 1 YY\n";
    assert!(matches!(parse_model(minus_identity), Err(Error::Validation(_))));
    match parse_model("qubits 2\nterm 1 ZQ\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let m = parse_model("qubits 2\nterm 3/2 ZZ\n").unwrap();
    assert_eq!(m.couplings()[0], Rational::new(3, 2));
}
