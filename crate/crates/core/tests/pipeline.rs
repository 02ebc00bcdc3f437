use tropical_core::hypersurface::{check_balancing, tropical_hypersurface};
use tropical_core::intersection::{intersection_number, stable_intersection_seeded};
use tropical_core::io::SystemFile;
use tropical_core::rational::Int;
use tropical_core::rootcount::{generic_root_count, nonlinear_resonator_system, RootCountOptions};
use tropical_core::valuation::{tropicalize, SemiringMap};

const CONICS: &str = r#"{
    "field": {"Qp": 3},
    "convention": "min",
    "variables": ["x", "y"],
    "polynomials": [
        [{"coeff": "1", "monomial": [2, 0]}, {"coeff": "9", "monomial": [0, 2]},
         {"coeff": "1/3", "monomial": [1, 1]}, {"coeff": "-1", "monomial": [0, 0]}],
        [{"coeff": "27", "monomial": [2, 0]}, {"coeff": "1", "monomial": [0, 2]},
         {"coeff": "2", "monomial": [1, 0]}, {"coeff": "5", "monomial": [0, 0]}]
    ]
}"#;

#[test]
fn file_to_intersection_number() {
    let file = SystemFile::parse(CONICS).unwrap();
    let map = SemiringMap::new(file.field, file.convention);
    let complexes: Vec<_> = file
        .polynomials()
        .unwrap()
        .iter()
        .map(|p| tropical_hypersurface(&tropicalize(p, &map).unwrap()).unwrap().complex)
        .collect();
    for c in &complexes {
        assert!(check_balancing(c).unwrap().balanced);
    }
    let meet = stable_intersection_seeded(&complexes[0], &complexes[1], 3).unwrap();
    assert!(check_balancing(&meet).unwrap().balanced);
    assert_eq!(meet.total_multiplicity(), 4);
    assert_eq!(intersection_number(&complexes, 11).unwrap(), Int::from(4));
}

#[test]
fn resonator_survives_a_file_round_trip() {
    let s = nonlinear_resonator_system(1, 3).unwrap();
    let text = SystemFile::from_horizontal(&s).to_json();
    let back = SystemFile::parse(&text).unwrap().horizontal_system().unwrap();
    let count = generic_root_count(&back, RootCountOptions::default()).unwrap();
    assert_eq!(count, Int::from(7));
}
