//! JSON state files and the analysis report.
//!
//! A state file is `{"rho": [[[re, im], ...], ...]}` with a 4×4 array of
//! complex entries in the basis `|00>, |01>, |10>, |11>`.

use serde::{Deserialize, Serialize};

use crate::bloch::{decompose, BlochData};
use crate::concurrence::{concurrence, r_eigenvalues};
use crate::error::{Error, Result};
use crate::numerics::{Complex4x4, Real4x4, Vec3, C64};
use crate::sinisterness::{sinisterness_checked, ChiralSVD, Chirality};
use crate::states::DensityMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub rho: [[[f64; 2]; 4]; 4],
}

impl StateFile {
    pub fn from_matrix(m: &Complex4x4) -> Self {
        StateFile {
            rho: std::array::from_fn(|i| std::array::from_fn(|j| [m[(i, j)].re, m[(i, j)].im])),
        }
    }

    pub fn matrix(&self) -> Complex4x4 {
        let mut m = Complex4x4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = C64::new(self.rho[i][j][0], self.rho[i][j][1]);
            }
        }
        m
    }
}

/// Parses without validating the physics.
pub fn parse_state_file(text: &str) -> Result<StateFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses and validates a state file.
pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    DensityMatrix::new(parse_state_file(text)?.matrix())
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateFile::from_matrix(rho.matrix())).expect("plain arrays serialize")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiralityReport {
    pub singular_values: Vec3,
    #[serde(rename = "detU")]
    pub det_u: f64,
    #[serde(rename = "detV")]
    pub det_v: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub bloch: BlochData,
    pub gamma: Real4x4,
    pub sinisterness: f64,
    pub chirality: ChiralityReport,
    pub classification: Chirality,
    pub concurrence: f64,
    pub r_eigenvalues: [f64; 4],
    /// Some eigenvalue of `R` was negative beyond round-off and clamped.
    pub r_clamped: bool,
    pub purity: f64,
}

/// Everything the library computes about one state. The sinisterness is
/// taken from both paths and must agree.
pub fn analyze(rho: &DensityMatrix) -> Result<AnalysisReport> {
    let bloch = decompose(rho)?;
    let sinisterness = sinisterness_checked(rho)?;
    let svd = ChiralSVD::factor(&bloch.c);
    let r = r_eigenvalues(rho);
    Ok(AnalysisReport {
        gamma: bloch.gamma,
        bloch,
        sinisterness,
        chirality: ChiralityReport {
            singular_values: svd.s,
            det_u: svd.det_u,
            det_v: svd.det_v,
        },
        classification: svd.chirality(),
        concurrence: concurrence(rho),
        r_eigenvalues: r.r,
        r_clamped: r.clamped,
        purity: rho.purity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Invariant;
    use crate::states::PureState;

    #[test]
    fn round_trip() {
        let rho = DensityMatrix::random(4);
        let back = parse_state(&state_to_json(&rho)).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn bell_report() {
        let rho = DensityMatrix::from_pure(&PureState::bell()).unwrap();
        let r = analyze(&rho).unwrap();
        assert!((r.sinisterness + 1.0).abs() < 1e-14);
        assert!((r.concurrence - 1.0).abs() < 1e-14);
        assert_eq!(r.classification, Chirality::Sinister);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["classification"], "sinister");
        for key in ["bloch", "gamma", "sinisterness", "chirality", "concurrence", "r_eigenvalues", "purity"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["chirality"].get("detU").is_some());
    }

    #[test]
    fn mixed_report() {
        let r = analyze(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(r.sinisterness, 0.0);
        assert_eq!(r.concurrence, 0.0);
        assert_eq!(r.classification, Chirality::Undefined);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_state("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_state(r#"{"rho": [[1, 0]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_state(r#"{"sigma": []}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn validation_errors() {
        let mut f = StateFile::from_matrix(DensityMatrix::maximally_mixed().matrix());
        for i in 0..4 {
            f.rho[i][i][0] = 0.225;
        }
        let text = serde_json::to_string(&f).unwrap();
        match parse_state(&text) {
            Err(Error::Validation { invariant, .. }) => assert_eq!(invariant, Invariant::Trace),
            other => panic!("{other:?}"),
        }
        let mut f = StateFile::from_matrix(DensityMatrix::maximally_mixed().matrix());
        f.rho[0][1] = [0.1, 0.0];
        match parse_state(&serde_json::to_string(&f).unwrap()) {
            Err(Error::Validation { invariant, .. }) => assert_eq!(invariant, Invariant::Hermiticity),
            other => panic!("{other:?}"),
        }
    }
}
