use std::collections::BTreeSet;

use coupled_riemann::classifier::*;
use coupled_riemann::Execution;
use proptest::prelude::*;

/// One interior point per area, chosen from the sonic-point, shock-speed
/// and double-shock inequalities.
const NEGATIVE_POINTS: [(&str, f64, f64); 17] = [
    ("A", -0.25, 0.5),
    ("B", -0.75, 0.5),
    ("C", -1.5, 0.5),
    ("D", -1.5, -0.25),
    ("E", -1.5, -0.75),
    ("F", -0.4, -0.1),
    ("G", -0.75, -0.25),
    ("H", -0.9, -0.6),
    ("I", -1.2, -1.5),
    ("J", 0.2, -3.0),
    ("K", 0.5, -2.0),
    ("L", 2.5, -1.2),
    ("M", 0.5, 0.2),
    ("N", 0.3, -0.5),
    ("O", 0.2, -1.2),
    ("P", -0.4, -1.5),
    ("Q", -0.1, -1.5),
];

const POSITIVE_POINTS: [(&str, f64, f64); 11] = [
    ("A", 1.2, 1.8),
    ("B", 0.5, 1.5),
    ("C", -0.5, 1.5),
    ("D", -0.5, 0.5),
    ("E", -0.8, -0.3),
    ("F", -0.2, -0.6),
    ("G", 0.3, -0.8),
    ("H", 0.2, 0.7),
    ("H", 0.5, -0.2),
    ("I", 1.8, 0.5),
    ("J", 1.8, 1.5),
];

fn expected(c: f64, label: &str) -> BTreeSet<SolutionType> {
    table(c).iter().find(|(l, _)| *l == label).unwrap().1.iter().copied().collect()
}

fn check_points(c: f64, points: &[(&str, f64, f64)]) {
    for &(label, ul, ur) in points {
        let r = classify_point(c, ul, ur).unwrap();
        assert_eq!(r.area_label, label, "({ul}, {ur})");
        assert_eq!(r.solutions, expected(c, label), "area {label}");
        assert_eq!(r.witnesses.len(), r.solutions.len());
        for w in &r.witnesses {
            assert!(w.constructed && w.trace_pass, "{label}: {w:?}");
            if w.kind.has_layer() {
                assert_eq!(w.matching_pass, Some(true), "{label}: {w:?}");
            }
        }
    }
}

#[test]
fn negative_offset_table() {
    check_points(-1.0, &NEGATIVE_POINTS);
}

#[test]
fn positive_offset_table() {
    check_points(1.0, &POSITIVE_POINTS);
}

#[test]
fn sample_point_of_area_g() {
    let r = classify_point(-1.0, -0.75, -0.25).unwrap();
    assert_eq!(r.area_label, "G");
    assert_eq!(r.solutions, BTreeSet::from([SolutionType::RMinus, SolutionType::RPlus, SolutionType::RMinusRPlus]));
    let dbl = r.witnesses.iter().find(|w| w.kind == SolutionType::RMinusRPlus).unwrap();
    assert_eq!(dbl.ubar, Some(-0.5));
    assert!(dbl.selection_pass);
}

#[test]
fn double_shock_point_contains_double_shock() {
    let r = classify_point(-1.0, 0.0, -0.75).unwrap();
    assert!(r.solutions.contains(&SolutionType::SMinusSPlus));
    let w = r.witnesses.iter().find(|w| w.kind == SolutionType::SMinusSPlus).unwrap();
    assert!((w.ubar.unwrap() + 3.4375 / 6.5).abs() < 1e-12);
    assert!(w.selection_pass && w.trace_pass);
}

#[test]
fn diagonal_is_constant() {
    let m = classify_grid(-1.0, [[-2.0, 1.0], [-2.0, 1.0]], 12, Execution::Sequential).unwrap();
    for n in &m.nodes {
        assert_eq!(n.u_l == n.u_r, n.area == "constant");
        assert_eq!(n.u_l == n.u_r, n.multiplicity == 0);
    }
    assert!(classify_point(0.0, 0.1, 0.2).is_err());
}

#[test]
fn positive_offset_grid_has_ten_signatures() {
    let m = classify_grid(1.0, [[-1.0, 2.0], [-1.0, 2.0]], 60, Execution::default()).unwrap();
    assert_eq!(m.distinct_signatures(), 10, "{:?}", m.signatures());
}

#[test]
fn negative_offset_grid_signatures() {
    // J and L need u_L − u_R > −c beyond the box [−2, 1]².
    let small = classify_grid(-1.0, [[-2.0, 1.0], [-2.0, 1.0]], 60, Execution::default()).unwrap();
    assert_eq!(small.distinct_signatures(), 15);
    let areas: BTreeSet<String> = small.nodes.iter().map(|n| n.area.clone()).collect();
    assert!(!areas.contains("J") && !areas.contains("L"));

    let big = classify_grid(-1.0, [[-4.0, 3.0], [-4.0, 3.0]], 60, Execution::default()).unwrap();
    assert_eq!(big.distinct_signatures(), 17, "{:?}", big.signatures());
}

#[test]
fn reverse_table_against_forward_table() {
    let m = classify_grid(-1.0, [[-4.0, 3.0], [-4.0, 3.0]], 60, Execution::default()).unwrap();
    let rev = m.reverse_table();
    for (t, areas) in &rev {
        let from_table: BTreeSet<String> = TABLE_NEGATIVE.iter().filter(|(_, ts)| ts.contains(t)).map(|(l, _)| l.to_string()).collect();
        assert_eq!(areas, &from_table, "{t}");
    }
    let reference = |t: SolutionType| -> BTreeSet<String> {
        REVERSE_TABLE_NEGATIVE.iter().find(|(s, _)| *s == t).unwrap().1.iter().map(|s| s.to_string()).collect()
    };
    assert_eq!(rev[&SolutionType::SMinusSPlus], reference(SolutionType::SMinusSPlus));
    // The reference reverse table omits J and L for T although the forward
    // table lists T there.
    assert_eq!(rev[&SolutionType::T], BTreeSet::from(["J", "K", "L", "O"].map(String::from)));
    assert_ne!(rev[&SolutionType::T], reference(SolutionType::T));
}

#[test]
fn layers_exist_only_where_flux_balances() {
    let opts = ClassifyOptions { confirm_layers: true, ..ClassifyOptions::default() };
    let found = |ul: f64, ur: f64| {
        let r = classify_point_with(-1.0, ul, ur, &opts).unwrap();
        let w = r.witnesses.iter().find(|w| w.kind == SolutionType::T).unwrap().clone();
        (r.area_label, w.layer_balance_ok, w.layer_found)
    };
    assert_eq!(found(0.5, -2.0), ("K".to_string(), Some(true), Some(true)));
    assert_eq!(found(2.5, -1.2), ("L".to_string(), Some(false), Some(false)));
    assert_eq!(found(0.2, -3.0), ("J".to_string(), Some(false), Some(false)));
}

#[test]
fn sequential_and_parallel_grids_agree() {
    let run = |e| classify_grid(-1.0, [[-2.0, 1.0], [-2.0, 1.0]], 30, e).unwrap();
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
}

#[test]
fn grid_argument_errors() {
    assert!(classify_grid(-1.0, [[-2.0, 1.0], [-2.0, 1.0]], 1, Execution::Sequential).is_err());
    assert!(classify_grid(-1.0, [[1.0, -2.0], [-2.0, 1.0]], 8, Execution::Sequential).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_off_diagonal_point_is_labelled(c in prop_oneof![-2.0f64..-0.2, 0.2f64..2.0], ul in -4.0f64..4.0, ur in -4.0f64..4.0) {
        prop_assume!(ul != ur);
        let r = classify_point(c, ul, ur).unwrap();
        prop_assert!(!r.solutions.is_empty());
        prop_assert_ne!(r.area_label.as_str(), "?");
        prop_assert_eq!(&r.solutions, &expected(c, &r.area_label));
        // Witnesses are pairwise distinct solutions.
        for (i, a) in r.witnesses.iter().enumerate() {
            for b in &r.witnesses[i + 1..] {
                let same = (a.u_minus - b.u_minus).abs() < 1e-6 && (a.u_plus - b.u_plus).abs() < 1e-6;
                prop_assert!(!same, "{:?} {:?}", a, b);
            }
        }
    }
}
