//! Cross-validation against exact realizations: for spheres with known
//! coordinates, the scaled true slacks give a positive point of the
//! dehomogenized parametrized matrix, so every oriented entry must evaluate
//! strictly positive off the incidences and zero on them. This exercises
//! flag search, bases, dehomogenization, reconstruction, and orientation
//! inference end to end against an independent route.

mod support;

use spherecert::pipeline::build_bundle;
use spherecert::polynomial::Rational;
use support::{load_sphere, rat, realization_assignment};

fn check_positive_point(fixture_name: &str, coords: Vec<Vec<Rational>>) {
    let (sphere, ov) = load_sphere(fixture_name);
    let bundle = build_bundle(sphere, &ov, false).unwrap();
    let assignment = realization_assignment(&bundle, &coords);
    for i in 0..bundle.dehom.num_rows() {
        for c in 0..bundle.dehom.num_cols() {
            let value = bundle.dehom.entry(i, c).evaluate(&assignment).unwrap();
            if bundle.dehom.incident(i, c) {
                assert!(
                    value == rat(0),
                    "{fixture_name}: incident entry ({},{}) = {value}",
                    i + 1,
                    c + 1
                );
            } else {
                assert!(
                    value > rat(0),
                    "{fixture_name}: entry ({},{}) = {value} not positive",
                    i + 1,
                    c + 1
                );
            }
        }
    }
}

fn unit(d: usize, k: Option<usize>) -> Vec<Rational> {
    (0..d)
        .map(|i| if Some(i) == k { rat(1) } else { rat(0) })
        .collect()
}

#[test]
fn prism_natural_labeling() {
    // conv{0, e1, e2, e3, e1+e3, e2+e3}
    let coords = vec![
        unit(3, None),
        unit(3, Some(0)),
        unit(3, Some(1)),
        unit(3, Some(2)),
        vec![rat(1), rat(0), rat(1)],
        vec![rat(0), rat(1), rat(1)],
    ];
    check_positive_point("prism.json", coords.clone());
    check_positive_point("prism_paper.json", coords);
}

#[test]
fn simplices() {
    for d in 2..=5 {
        let name = format!("simplex_{d}.json");
        let coords: Vec<Vec<Rational>> = std::iter::once(unit(d, None))
            .chain((0..d).map(|i| unit(d, Some(i))))
            .collect();
        check_positive_point(&name, coords);
    }
}

#[test]
fn cube() {
    let coords: Vec<Vec<Rational>> = (0..8)
        .map(|m| vec![rat(m & 1), rat(m >> 1 & 1), rat(m >> 2 & 1)])
        .collect();
    check_positive_point("cube_3.json", coords);
}

#[test]
fn cyclic_polytope() {
    let coords: Vec<Vec<Rational>> = (1i64..=6)
        .map(|t| vec![rat(t), rat(t * t), rat(t * t * t)])
        .collect();
    check_positive_point("cyclic_6_3.json", coords);
}
