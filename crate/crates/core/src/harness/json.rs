//! Wire formats. Every scalar is an exact `"num/den"` string (`"4"` for
//! integers).

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::config::{band_key, scalar_field};
use super::HarnessError;
use crate::algebra::{format_scalar, Polynomial, Scalar};
use crate::banded::{
    BandedHessenberg, BidiagonalChain, LowerBidiagonalUnit, PolynomialSequence, UnitLowerBanded, UpperBidiagonal,
};
use crate::engine::{PartialFactorization, TheoremCertificate};
use crate::functionals::{CheckKind, LambdaLadder, LinearFunctional};
use crate::relations::RelationCheck;

fn strings(values: &[Scalar]) -> Vec<String> {
    values.iter().map(format_scalar).collect()
}

fn parse_all(name: &str, values: &[String]) -> Result<Vec<Scalar>, HarnessError> {
    values.iter().map(|v| scalar_field(name, v)).collect()
}

/// `{"p", "N", "bands": {"0": [...], "-1": [...], ..., "-p": [...]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub p: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub bands: IndexMap<String, Vec<String>>,
}

impl MatrixJson {
    /// Rows beyond the valid window are dropped, so `N` is the number of
    /// trustworthy rows.
    pub fn from_matrix(m: &BandedHessenberg) -> Self {
        let n = m.valid_rows();
        let bands = (0..=m.p())
            .map(|d| {
                let band = (d..n).map(|row| format_scalar(&m.get(row, row - d))).collect();
                (band_key(d), band)
            })
            .collect();
        Self { p: m.p(), n, bands }
    }

    pub fn to_matrix(&self) -> Result<BandedHessenberg, HarnessError> {
        let bands = (0..=self.p)
            .map(|d| {
                let key = band_key(d);
                let band = self
                    .bands
                    .get(&key)
                    .ok_or_else(|| HarnessError::Config(format!("missing band \"{key}\"")))?;
                parse_all(&key, band)
            })
            .collect::<Result<Vec<_>, _>>()?;
        BandedHessenberg::from_bands(self.p, self.n, bands).map_err(|e| HarnessError::Config(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub j: usize,
    pub sub: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperJson {
    pub diag: Vec<String>,
}

impl UpperJson {
    pub fn from_upper(u: &UpperBidiagonal) -> Self {
        Self {
            diag: strings(u.diagonal()),
        }
    }
}

/// `{"p", "C", "factors": [{"j", "sub"}], "U": {"diag"}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub p: usize,
    #[serde(rename = "C")]
    pub shift: String,
    pub factors: Vec<FactorJson>,
    #[serde(rename = "U")]
    pub upper: UpperJson,
}

impl ChainJson {
    pub fn from_chain(chain: &BidiagonalChain) -> Self {
        Self {
            p: chain.p(),
            shift: format_scalar(chain.shift()),
            factors: chain
                .factors()
                .iter()
                .map(|f| FactorJson {
                    j: f.index(),
                    sub: strings(f.subs()),
                })
                .collect(),
            upper: UpperJson::from_upper(chain.upper()),
        }
    }

    pub fn to_chain(&self) -> Result<BidiagonalChain, HarnessError> {
        let factors = self
            .factors
            .iter()
            .map(|f| Ok(LowerBidiagonalUnit::new(f.j, parse_all("sub", &f.sub)?)))
            .collect::<Result<Vec<_>, HarnessError>>()?;
        let upper = UpperBidiagonal::new(parse_all("diag", &self.upper.diag)?);
        BidiagonalChain::new(self.p, scalar_field("C", &self.shift)?, factors, upper)
            .map_err(|e| HarnessError::Config(e.to_string()))
    }
}

/// Strictly lower bands of a unit lower banded matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerJson {
    pub bandwidth: usize,
    pub bands: IndexMap<String, Vec<String>>,
}

impl LowerJson {
    pub fn from_lower(l: &UnitLowerBanded) -> Self {
        let n = l.size();
        let bands = (1..=l.bandwidth())
            .map(|d| (band_key(d), (d..n).map(|r| format_scalar(&l.get(r, r - d))).collect()))
            .collect();
        Self {
            bandwidth: l.bandwidth(),
            bands,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LuJson {
    #[serde(rename = "L")]
    pub lower: LowerJson,
    #[serde(rename = "U")]
    pub upper: UpperJson,
}

/// `{"M", "moments"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalJson {
    #[serde(rename = "M")]
    pub m: usize,
    pub moments: Vec<String>,
}

impl FunctionalJson {
    pub fn from_functional(f: &LinearFunctional) -> Self {
        Self {
            m: f.max_degree(),
            moments: strings(f.moments()),
        }
    }
}

/// `{"p", "lambda"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderJson {
    pub p: usize,
    pub lambda: Vec<Vec<String>>,
}

impl LadderJson {
    pub fn from_ladder(l: &LambdaLadder) -> Self {
        Self {
            p: l.num_rows(),
            lambda: l.rows().iter().map(|r| strings(r)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageLadderJson {
    pub stage: usize,
    pub lambda: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySequenceJson {
    pub j: usize,
    /// Coefficients from the constant term up.
    pub polys: Vec<Vec<String>>,
}

impl PolySequenceJson {
    pub fn from_sequence(j: usize, seq: &PolynomialSequence) -> Self {
        Self {
            j,
            polys: seq
                .as_slice()
                .iter()
                .map(|q: &Polynomial| strings(q.coeffs()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaJson {
    pub stage: usize,
    pub m: usize,
    pub delta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub r: usize,
    pub k: usize,
    pub n: usize,
    pub kind: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageVerdictJson {
    pub j: usize,
    pub verdict: String,
    pub vanishing_checked: usize,
    pub nonvanishing_checked: usize,
    pub failures: Vec<WitnessJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseJson {
    pub stage: usize,
    pub s: usize,
    pub holds: bool,
}

fn verdict(pass: bool) -> String {
    if pass { "pass" } else { "fail" }.into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub fingerprint: String,
    pub p: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub window: usize,
    #[serde(rename = "C")]
    pub shift: String,
    pub hypotheses: Vec<DeltaJson>,
    pub free_entries: Vec<FactorJson>,
    pub stage_ladders: Vec<StageLadderJson>,
    pub stages: Vec<StageVerdictJson>,
    pub staircase: Vec<StaircaseJson>,
    pub structural_consistency: bool,
    pub warnings: Vec<String>,
    pub verdict: String,
}

impl CertificateJson {
    pub fn from_certificate(c: &TheoremCertificate) -> Self {
        Self {
            fingerprint: c.fingerprint.clone(),
            p: c.p,
            n: c.size,
            window: c.window,
            shift: format_scalar(&c.shift),
            hypotheses: c
                .hypotheses
                .iter()
                .map(|d| DeltaJson {
                    stage: d.stage,
                    m: d.m,
                    delta: format_scalar(&d.value),
                })
                .collect(),
            free_entries: c
                .free
                .values()
                .iter()
                .enumerate()
                .map(|(idx, v)| FactorJson {
                    j: idx + 1,
                    sub: strings(v),
                })
                .collect(),
            stage_ladders: c
                .ladders
                .iter()
                .map(|l| StageLadderJson {
                    stage: l.stage(),
                    lambda: l.rows().iter().map(|r| strings(r)).collect(),
                })
                .collect(),
            stages: c
                .stage_reports
                .iter()
                .map(|s| StageVerdictJson {
                    j: s.j,
                    verdict: verdict(s.report.passed()),
                    vanishing_checked: s.report.vanishing_checked,
                    nonvanishing_checked: s.report.nonvanishing_checked,
                    failures: s
                        .report
                        .failures
                        .iter()
                        .map(|w| WitnessJson {
                            r: w.r,
                            k: w.k,
                            n: w.n,
                            kind: match w.kind {
                                CheckKind::Vanishing => "vanishing",
                                CheckKind::Nonvanishing => "nonvanishing",
                            }
                            .into(),
                            value: format_scalar(&w.value),
                        })
                        .collect(),
                })
                .collect(),
            staircase: c
                .staircase_checks
                .iter()
                .map(|s| StaircaseJson {
                    stage: s.stage,
                    s: s.s,
                    holds: s.holds,
                })
                .collect(),
            structural_consistency: c.structural_consistency,
            warnings: c.warnings.clone(),
            verdict: verdict(c.passed()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub relation: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stage: Option<usize>,
    pub checked: usize,
    pub failures: Vec<usize>,
    pub verdict: String,
}

impl RelationJson {
    pub fn from_check(c: &RelationCheck) -> Self {
        Self {
            relation: c.relation.name().into(),
            stage: c.stage,
            checked: c.checked,
            failures: c.failures.clone(),
            verdict: verdict(c.passed()),
        }
    }
}

/// `J - C I = L^(1) ... L^(m) * remainder * U` after a stage-`m` stop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialJson {
    pub stages: usize,
    pub factors: Vec<FactorJson>,
    pub remainder: LowerJson,
    #[serde(rename = "U")]
    pub upper: UpperJson,
}

impl PartialJson {
    pub fn from_partial(p: &PartialFactorization) -> Self {
        Self {
            stages: p.stages,
            factors: p
                .factors
                .iter()
                .map(|f| FactorJson {
                    j: f.index(),
                    sub: strings(f.subs()),
                })
                .collect(),
            remainder: LowerJson::from_lower(&p.remainder),
            upper: UpperJson::from_upper(&p.upper),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, ratio};

    fn reference(n: usize) -> BandedHessenberg {
        BandedHessenberg::from_recurrence(1, n, |r, c| if r == c { int(2) } else { int(1) }).unwrap()
    }

    #[test]
    fn matrix_json_shape() {
        let m = reference(3);
        let json = MatrixJson::from_matrix(&m);
        assert_eq!(
            serde_json::to_string(&json).unwrap(),
            r#"{"p":1,"N":3,"bands":{"0":["2","2","2"],"-1":["1","1"]}}"#
        );
        assert_eq!(json.to_matrix().unwrap(), m);
    }

    #[test]
    fn chain_json_round_trip() {
        let chain = BidiagonalChain::new(
            1,
            int(0),
            vec![LowerBidiagonalUnit::new(1, vec![ratio(1, 2), ratio(2, 3)])],
            UpperBidiagonal::new(vec![int(2), ratio(3, 2), ratio(4, 3)]),
        )
        .unwrap();
        let json = ChainJson::from_chain(&chain);
        assert_eq!(
            serde_json::to_string(&json).unwrap(),
            r#"{"p":1,"C":"0","factors":[{"j":1,"sub":["1/2","2/3"]}],"U":{"diag":["2","3/2","4/3"]}}"#
        );
        assert_eq!(json.to_chain().unwrap(), chain);
    }

    #[test]
    fn functional_and_ladder_shapes() {
        let f = LinearFunctional::new(vec![int(1), int(2), int(5)]);
        assert_eq!(
            serde_json::to_string(&FunctionalJson::from_functional(&f)).unwrap(),
            r#"{"M":2,"moments":["1","2","5"]}"#
        );
        let l = LambdaLadder::new(0, vec![vec![int(1)], vec![ratio(-1, 2), int(3)]]).unwrap();
        assert_eq!(
            serde_json::to_string(&LadderJson::from_ladder(&l)).unwrap(),
            r#"{"p":2,"lambda":[["1"],["-1/2","3"]]}"#
        );
    }
}
