//! Machine-readable records emitted by the command-line surface.

use crate::admissible::{anomaly, AdmissibleClass, BoundaryLevel};
use crate::rootdata::RootSystem;
use crate::Q;
use serde::Serialize;

/// A rational as an exact `[numerator, denominator]` pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Rat(pub i64, pub i64);

impl From<Q> for Rat {
    fn from(x: Q) -> Self {
        Rat(*x.numer(), *x.denom())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightRecord {
    pub kind: String,
    pub rank: usize,
    pub u: i64,
    pub k: Rat,
    pub class_id: usize,
    pub b: Vec<Rat>,
    pub b_minus: Vec<Rat>,
    pub u_b_word: Vec<u8>,
    pub length: usize,
    pub epsilon: i64,
    pub weight: Vec<Rat>,
    pub anomaly: Rat,
}

pub fn weight_record(
    rs: &RootSystem,
    lv: &BoundaryLevel,
    class: &AdmissibleClass,
) -> WeightRecord {
    WeightRecord {
        kind: rs.kind.to_string(),
        rank: rs.rank(),
        u: lv.u,
        k: lv.k.into(),
        class_id: class.class_id,
        b: class.rep.b.0.iter().map(|&x| x.into()).collect(),
        b_minus: class.rep.b_minus.0.iter().map(|&x| x.into()).collect(),
        u_b_word: class.rep.u_word.iter().map(|&i| i + 1).collect(),
        length: class.rep.length_pi(rs),
        epsilon: class.rep.sign_pi(rs),
        weight: class.weight.pairings.iter().map(|&x| x.into()).collect(),
        anomaly: anomaly(rs, lv, &class.weight).into(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixRecord {
    pub kind: String,
    pub u: i64,
    pub flavor: String,
    pub matrix: String,
    pub index: Vec<usize>,
    pub entries: Vec<Vec<ComplexEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<std::collections::BTreeMap<String, f64>>,
}

/// One record per matrix (S and T), residuals attached to the S record.
pub fn matrix_records(
    rs: &RootSystem,
    lv: &BoundaryLevel,
    m: &crate::modular::ModularMatrices,
    residuals: Option<std::collections::BTreeMap<String, f64>>,
) -> Vec<MatrixRecord> {
    let grab = |c: &crate::modular::CMat| -> Vec<Vec<ComplexEntry>> {
        (0..c.rows)
            .map(|i| {
                (0..c.cols)
                    .map(|j| ComplexEntry {
                        re: c.at(i, j).re,
                        im: c.at(i, j).im,
                    })
                    .collect()
            })
            .collect()
    };
    let flavor = match m.flavor {
        crate::modular::Flavor::KacWakimoto => "kac-wakimoto",
        crate::modular::Flavor::DahaSpecialized => "daha-specialized",
    };
    vec![
        MatrixRecord {
            kind: rs.kind.to_string(),
            u: lv.u,
            flavor: flavor.into(),
            matrix: "S".into(),
            index: m.class_ids.clone(),
            entries: grab(&m.s),
            residuals,
        },
        MatrixRecord {
            kind: rs.kind.to_string(),
            u: lv.u,
            flavor: flavor.into(),
            matrix: "T".into(),
            index: m.class_ids.clone(),
            entries: grab(&m.t),
            residuals: None,
        },
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct CountRecord {
    pub kind: String,
    pub u: i64,
    pub levi: Vec<usize>,
    pub levi_components: Vec<String>,
    pub exponents: Vec<i64>,
    pub weyl_order: u128,
    pub closed_form: i128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<i128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableHitRecord {
    pub kind: String,
    pub u: i64,
    pub fixture: String,
    pub count: i128,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}
