//! The built-in two-state worked example: the full storyline for the
//! operator diag(1, -i), from decomposition through the abstract
//! daseinisation table, each stage diffed against embedded golden
//! tables.

use crate::fixture::{AbstractLattice, AbstractSpec};
use crate::ops::abstract_family_table;
use crate::report::{fmt_c, Report};
use cqv_core::dasein::{das_lattice_family, lattice_family_pointwise_leq, DasMode};
use cqv_core::linops::{normal_spectral_decomposition, split_normal, ComplexMatrix, C64};
use cqv_core::order::spectral_order_leq;
use std::collections::BTreeMap;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn o_z(perturb: Option<f64>) -> ComplexMatrix {
    let mut m = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, -1.0)]);
    if let Some(eps) = perturb {
        m.set(0, 0, m.get(0, 0) + c(eps, 0.0));
    }
    m
}

/// Golden branch: name, region representative, expected diagonal mask.
struct Branch {
    name: &'static str,
    condition: &'static str,
    at: (f64, f64),
    diag: [u8; 2],
}

const SPECFAM: [Branch; 9] = [
    Branch {
        name: "0 0",
        condition: "eps < 0, eta < -1",
        at: (-1.0, -2.0),
        diag: [0, 0],
    },
    Branch {
        name: "0 Q2",
        condition: "eps < 0, -1 <= eta < 0",
        at: (-1.0, -1.0),
        diag: [0, 0],
    },
    Branch {
        name: "0 (Q1+Q2)",
        condition: "eps < 0, 0 <= eta",
        at: (-1.0, 0.0),
        diag: [0, 0],
    },
    Branch {
        name: "P2 0",
        condition: "0 <= eps < 1, eta < -1",
        at: (0.0, -2.0),
        diag: [0, 0],
    },
    Branch {
        name: "P2 Q2",
        condition: "0 <= eps < 1, -1 <= eta < 0",
        at: (0.0, -1.0),
        diag: [0, 1],
    },
    Branch {
        name: "P2 (Q1+Q2)",
        condition: "0 <= eps < 1, 0 <= eta",
        at: (0.0, 0.0),
        diag: [0, 1],
    },
    Branch {
        name: "(P1+P2) 0",
        condition: "1 <= eps, eta < -1",
        at: (1.0, -2.0),
        diag: [0, 0],
    },
    Branch {
        name: "(P1+P2) Q2",
        condition: "1 <= eps, -1 <= eta < 0",
        at: (1.0, -1.0),
        diag: [0, 1],
    },
    Branch {
        name: "(P1+P2) (Q1+Q2)",
        condition: "1 <= eps, 0 <= eta",
        at: (1.0, 0.0),
        diag: [1, 1],
    },
];

const SPECFAM_SQUARED: [Branch; 4] = [
    Branch {
        name: "0 0",
        condition: "eps < 1, eta < 0",
        at: (0.0, -1.0),
        diag: [0, 0],
    },
    Branch {
        name: "0 Q",
        condition: "eps < 1, 0 <= eta",
        at: (0.0, 0.0),
        diag: [0, 0],
    },
    Branch {
        name: "(P1+P2) 0",
        condition: "1 <= eps, eta < 0",
        at: (1.0, -1.0),
        diag: [0, 0],
    },
    Branch {
        name: "(P1+P2) Q",
        condition: "1 <= eps, 0 <= eta",
        at: (1.0, 0.0),
        diag: [1, 1],
    },
];

/// One-parameter golden branches for the self-adjoint reduction.
struct RealBranch {
    name: &'static str,
    condition: &'static str,
    at: f64,
    diag: [u8; 2],
}

const SUM_FAMILY: [RealBranch; 3] = [
    RealBranch {
        name: "0",
        condition: "lambda < -1",
        at: -2.0,
        diag: [0, 0],
    },
    RealBranch {
        name: "R2",
        condition: "-1 <= lambda < 1",
        at: -1.0,
        diag: [0, 1],
    },
    RealBranch {
        name: "R1+R2",
        condition: "1 <= lambda",
        at: 1.0,
        diag: [1, 1],
    },
];

const ABS_SQUARED_FAMILY: [RealBranch; 2] = [
    RealBranch {
        name: "0",
        condition: "lambda < 1",
        at: 0.0,
        diag: [0, 0],
    },
    RealBranch {
        name: "R1+R2",
        condition: "1 <= lambda",
        at: 1.0,
        diag: [1, 1],
    },
];

/// The six-branch golden table of the abstract daseinisation.
const DASEINISED: [(&str, &str); 6] = [
    ("0 0", "eps < 0, eta < -1"),
    ("0 Q2", "eps < 0, -1 <= eta < 0"),
    ("0 (Q1+Q2)", "eps < 0, 0 <= eta"),
    ("(P1+P2) 0", "0 <= eps, eta < -1"),
    ("(P1+P2) Q2", "0 <= eps, -1 <= eta < 0"),
    ("(P1+P2) (Q1+Q2)", "0 <= eps, 0 <= eta"),
];

fn diag_mask_matches(m: &ComplexMatrix, diag: &[u8; 2]) -> Option<String> {
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j {
                c(diag[i] as f64, 0.0)
            } else {
                c(0.0, 0.0)
            };
            let got = m.get(i, j);
            if got != want {
                return Some(format!(
                    "entry ({i},{j}) = {} (expected {})",
                    fmt_c(got),
                    fmt_c(want)
                ));
            }
        }
    }
    None
}

/// The abstract four-atom fixture behind the daseinisation example.
pub fn m4_abstract_spec() -> AbstractSpec {
    let mut elements = BTreeMap::new();
    elements.insert("P1".to_string(), vec!["a".into(), "b".into()]);
    elements.insert("P2".to_string(), vec!["c".into(), "d".into()]);
    elements.insert("Q1".to_string(), vec!["a".into(), "c".into()]);
    elements.insert("Q2".to_string(), vec!["b".into(), "d".into()]);
    elements.insert(
        "P1+P2".to_string(),
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
    );
    elements.insert(
        "Q1+Q2".to_string(),
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
    );
    let mut operators = BTreeMap::new();
    operators.insert(
        "Oz".to_string(),
        crate::fixture::AbstractFamilySpec {
            re: vec![(0.0, "P2".to_string()), (1.0, "P1+P2".to_string())],
            im: vec![(-1.0, "Q2".to_string()), (0.0, "Q1+Q2".to_string())],
        },
    );
    let mut contexts = BTreeMap::new();
    contexts.insert("V".to_string(), vec!["Q1".to_string(), "Q2".to_string()]);
    AbstractSpec {
        atoms: vec!["a".into(), "b".into(), "c".into(), "d".into()],
        elements,
        operators,
        contexts,
    }
}

pub fn run_paper_example(tol: f64, perturb: Option<f64>) -> Report {
    let mut report = Report::new("paper-example", "builtin", tol);
    let oz = o_z(perturb);

    // Decomposition into commuting self-adjoint parts.
    let (re, im) = split_normal(&oz, tol.max(1e-9)).expect("o_z is normal");
    let golden_re = ComplexMatrix::diag(&[c(1.0 + perturb.unwrap_or(0.0), 0.0), c(0.0, 0.0)]);
    let golden_im = ComplexMatrix::diag(&[c(0.0, 0.0), c(-1.0, 0.0)]);
    report.section(
        "split",
        vec![
            format!(
                "re part diag: {} {}",
                fmt_c(re.get(0, 0)),
                fmt_c(re.get(1, 1))
            ),
            format!(
                "im part diag: {} {}",
                fmt_c(im.get(0, 0)),
                fmt_c(im.get(1, 1))
            ),
        ],
    );
    report.check(
        "split into diag(1,0) + i diag(0,-1)",
        re.approx_eq(&golden_re, 0.0) && im.approx_eq(&golden_im, 0.0),
        None,
    );

    let (joint, fam) = normal_spectral_decomposition(&oz, tol.max(1e-9)).expect("decomposes");
    report.section(
        "eigenpairs",
        joint
            .pairs()
            .iter()
            .map(|(z, p)| format!("eigenvalue {} with rank-{} projector", fmt_c(*z), p.rank()))
            .collect(),
    );

    // Nine-branch family table.
    let mut lines = Vec::new();
    for b in &SPECFAM {
        lines.push(format!("{}  if {}", b.name, b.condition));
        let got = fam.evaluate(b.at.0, b.at.1);
        match diag_mask_matches(got.matrix(), &b.diag) {
            None => report.check(format!("branch {} of the family table", b.name), true, None),
            Some(diff) => report.check_detail(
                format!("branch {} of the family table", b.name),
                false,
                None,
                diff,
            ),
        }
    }
    report.section("spectral family of Oz", lines);

    // Squared operator (the identity) and its four branches.
    let oz2 = oz.mul(&oz.adjoint());
    let (joint2, fam2) = normal_spectral_decomposition(&oz2, tol.max(1e-9)).expect("decomposes");
    let mut lines = Vec::new();
    for b in &SPECFAM_SQUARED {
        lines.push(format!("{}  if {}", b.name, b.condition));
        let got = fam2.evaluate(b.at.0, b.at.1);
        match diag_mask_matches(got.matrix(), &b.diag) {
            None => report.check(
                format!("branch {} of the squared family", b.name),
                true,
                None,
            ),
            Some(diff) => report.check_detail(
                format!("branch {} of the squared family", b.name),
                false,
                None,
                diff,
            ),
        }
    }
    report.section("spectral family of Oz^2", lines);

    // Spectral-order conclusion.
    let leq = spectral_order_leq(&joint, &joint2, tol.max(1e-10)).expect("same dimension");
    report.check("Oz <=_s Oz^2", leq, None);

    // Self-adjoint reduction: A + B = diag(1, -1) against |Oz^2|.
    let sum = re.add(&im);
    let (sum_joint, sum_fam) =
        normal_spectral_decomposition(&sum, tol.max(1e-9)).expect("decomposes");
    let mut lines = Vec::new();
    for b in &SUM_FAMILY {
        lines.push(format!("{}  if {}", b.name, b.condition));
        let got = sum_fam.evaluate(b.at, 1.0);
        match diag_mask_matches(got.matrix(), &b.diag) {
            None => report.check(format!("branch {} of the A+B family", b.name), true, None),
            Some(diff) => report.check_detail(
                format!("branch {} of the A+B family", b.name),
                false,
                None,
                diff,
            ),
        }
    }
    report.section("spectral family of A+B", lines);
    let mut lines = Vec::new();
    for b in &ABS_SQUARED_FAMILY {
        lines.push(format!("{}  if {}", b.name, b.condition));
        let got = fam2.evaluate(b.at, 1.0);
        match diag_mask_matches(got.matrix(), &b.diag) {
            None => report.check(
                format!("branch {} of the |Oz^2| family", b.name),
                true,
                None,
            ),
            Some(diff) => report.check_detail(
                format!("branch {} of the |Oz^2| family", b.name),
                false,
                None,
                diff,
            ),
        }
    }
    report.section("spectral family of |Oz^2|", lines);
    report.section(
        "piecewise comparison",
        vec![
            "E(|Oz^2|) = E(A+B)  if lambda < -1".to_string(),
            "E(|Oz^2|) <= E(A+B)  if -1 <= lambda < 1".to_string(),
            "E(|Oz^2|) = E(A+B)  if 1 <= lambda".to_string(),
        ],
    );
    let reduced = spectral_order_leq(&sum_joint, &joint2, tol.max(1e-10)).expect("same dimension");
    report.check("A+B <=_s |Oz^2| (reduction agrees)", reduced, None);

    // Abstract daseinisation table.
    let spec = m4_abstract_spec();
    let lat = AbstractLattice::build(&spec).expect("fixture lattice");
    let (afam, re_names, im_names) = lat.family(&spec.operators["Oz"]).expect("fixture family");
    let sub = lat
        .sublattice(&spec.contexts["V"])
        .expect("fixture context");
    let das = das_lattice_family(&afam, &sub, DasMode::Outer).expect("daseinises");
    let table = abstract_family_table(
        &lat,
        das.re_cuts(),
        &(0..das.re_cuts().len())
            .map(|j| das.re_mask(j))
            .collect::<Vec<_>>(),
        &re_names,
        das.im_cuts(),
        &(0..das.im_cuts().len())
            .map(|k| das.im_mask(k))
            .collect::<Vec<_>>(),
        &im_names,
    );
    report.section(
        "daseinised family (abstract context V)",
        table.lines.clone(),
    );
    if table.branches.len() != DASEINISED.len() {
        report.check_detail(
            "daseinised table has six branches",
            false,
            None,
            format!("found {}", table.branches.len()),
        );
    } else {
        report.check("daseinised table has six branches", true, None);
        for ((golden_name, _), (got_name, _, _)) in DASEINISED.iter().zip(&table.branches) {
            report.check_detail(
                format!("daseinised branch {golden_name}"),
                golden_name == got_name,
                None,
                format!("got {got_name}"),
            );
        }
    }
    let dominated = lattice_family_pointwise_leq(&afam, &das, &lat.lattice);
    report.check("delta0(Oz)_V <=_s Oz", dominated, None);

    report
}
