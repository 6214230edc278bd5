use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::algebra::{parse_scalar, Scalar};
use crate::functionals::moment_budget;

pub const DEFAULT_BOUND: i64 = 9;

fn default_bound() -> i64 {
    DEFAULT_BOUND
}

fn default_shift() -> String {
    "0".into()
}

/// One JSON document describing an instance and what to do with it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub p: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "C", default = "default_shift")]
    pub shift: String,
    #[serde(default)]
    pub seed: u64,
    pub window: usize,
    pub matrix: MatrixSource,
    #[serde(default)]
    pub nu: NuSource,
    #[serde(default)]
    pub free_entries: FreeSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputPaths>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixSource {
    /// Bands keyed `"0"`, `"-1"`, ..., `"-p"`; band `"-d"` lists
    /// `a(n, n-d)` for `n = d..N`.
    Explicit { bands: IndexMap<String, Vec<String>> },
    /// Numerators in `[-bound, bound]`, denominators in `[1, bound]`; the
    /// lowest band is nonzero.
    Random {
        #[serde(default = "default_bound")]
        bound: i64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NuSource {
    /// First `p` duals.
    #[default]
    Canonical,
    /// `lambda[i-1][k] = nu_i[P_k]`, `k < i`.
    Ladder { lambda: Vec<Vec<String>> },
    /// Dense ladder with every entry nonzero.
    Random {
        #[serde(default = "default_bound")]
        bound: i64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FreeSource {
    /// Chosen from the orthogonality vector's ladder.
    #[default]
    Theorem,
    /// Every free entry equal to `value`.
    Filled { value: String },
    /// `values[j-1]` holds rows `1..=p-j` of `L^(j)`.
    Explicit { values: Vec<Vec<String>> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
}

/// Command-line overrides of scalar fields.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub p: Option<usize>,
    pub seed: Option<u64>,
    pub shift: Option<String>,
    pub window: Option<usize>,
}

pub(crate) fn scalar_field(name: &str, text: &str) -> Result<Scalar, HarnessError> {
    parse_scalar(text).map_err(|e| HarnessError::Config(format!("{name}: {e}")))
}

impl InstanceConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(p) = overrides.p {
            self.p = p;
        }
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(c) = &overrides.shift {
            self.shift = c.clone();
        }
        if let Some(w) = overrides.window {
            self.window = w;
        }
    }

    pub fn shift_value(&self) -> Result<Scalar, HarnessError> {
        scalar_field("C", &self.shift)
    }

    pub fn moment_budget(&self) -> usize {
        moment_budget(self.window, self.p)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        let (p, n, w) = (self.p, self.n, self.window);
        if p == 0 {
            return bad("p must be at least 1".into());
        }
        if w == 0 {
            return bad("window must be at least 1".into());
        }
        if w + p + 1 > n {
            return bad(format!("window {w} with p = {p} needs N >= {}, got N = {n}", w + p + 1));
        }
        if self.moment_budget() > n {
            return bad(format!(
                "window {w} with p = {p} needs {} moments, but N = {n} provides only {n}",
                self.moment_budget()
            ));
        }
        self.shift_value()?;
        match &self.matrix {
            MatrixSource::Explicit { bands } => {
                if bands.len() != p + 1 {
                    return bad(format!("expected {} bands, got {}", p + 1, bands.len()));
                }
                for d in 0..=p {
                    let key = band_key(d);
                    let Some(band) = bands.get(&key) else {
                        return bad(format!("missing band \"{key}\""));
                    };
                    if band.len() != n - d {
                        return bad(format!("band \"{key}\" has {} entries, expected {}", band.len(), n - d));
                    }
                    for v in band {
                        scalar_field(&format!("band \"{key}\""), v)?;
                    }
                }
            }
            MatrixSource::Random { bound } => check_bound(*bound)?,
        }
        match &self.nu {
            NuSource::Canonical => {}
            NuSource::Ladder { lambda } => {
                if lambda.len() != p {
                    return bad(format!("ladder has {} rows, expected p = {p}", lambda.len()));
                }
                for (i, row) in lambda.iter().enumerate() {
                    if row.len() != i + 1 {
                        return bad(format!(
                            "ladder row {} has {} entries, expected {}",
                            i + 1,
                            row.len(),
                            i + 1
                        ));
                    }
                    for v in row {
                        scalar_field("lambda", v)?;
                    }
                }
            }
            NuSource::Random { bound } => check_bound(*bound)?,
        }
        match &self.free_entries {
            FreeSource::Theorem => {}
            FreeSource::Filled { value } => {
                scalar_field("free entry", value)?;
            }
            FreeSource::Explicit { values } => {
                if values.len() != p.saturating_sub(1) {
                    return bad(format!("free entries for {} factors, expected {}", values.len(), p - 1));
                }
                for (idx, row) in values.iter().enumerate() {
                    if row.len() != p - idx - 1 {
                        return bad(format!(
                            "L^({}) takes {} free entries, got {}",
                            idx + 1,
                            p - idx - 1,
                            row.len()
                        ));
                    }
                    for v in row {
                        scalar_field("free entry", v)?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_bound(bound: i64) -> Result<(), HarnessError> {
    if !(1..=1_000_000).contains(&bound) {
        return Err(HarnessError::Config(format!(
            "bound must lie in 1..=1000000, got {bound}"
        )));
    }
    Ok(())
}

pub(crate) fn band_key(d: usize) -> String {
    if d == 0 {
        "0".into()
    } else {
        format!("-{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_a() -> InstanceConfig {
        InstanceConfig::from_json(
            r#"{"p": 1, "N": 14, "C": "0", "window": 6,
                "matrix": {"kind": "explicit", "bands": {
                    "0": ["2","2","2","2","2","2","2","2","2","2","2","2","2","2"],
                    "-1": ["1","1","1","1","1","1","1","1","1","1","1","1","1"]}}}"#,
        )
        .unwrap()
    }

    #[test]
    fn parses_defaults() {
        let c = example_a();
        assert_eq!(c.seed, 0);
        assert_eq!(c.nu, NuSource::Canonical);
        assert_eq!(c.free_entries, FreeSource::Theorem);
        c.validate().unwrap();
        let random: InstanceConfig =
            InstanceConfig::from_json(r#"{"p":2,"N":16,"window":4,"matrix":{"kind":"random"}}"#).unwrap();
        assert_eq!(random.matrix, MatrixSource::Random { bound: 9 });
        assert_eq!(random.shift, "0");
    }

    #[test]
    fn window_too_large_is_rejected() {
        let mut c = example_a();
        c.window = 13;
        assert!(matches!(c.validate(), Err(HarnessError::Config(_))));
        let mut c = example_a();
        c.window = 7; // 7 + 7 + 1 = 15 moments > 14
        assert!(matches!(c.validate(), Err(HarnessError::Config(_))));
    }

    #[test]
    fn overrides_apply() {
        let mut c = example_a();
        c.apply(&Overrides {
            p: None,
            seed: Some(5),
            shift: Some("1/3".into()),
            window: Some(4),
        });
        assert_eq!((c.seed, c.shift.as_str(), c.window), (5, "1/3", 4));
    }

    #[test]
    fn malformed_inputs() {
        assert!(InstanceConfig::from_json("{").is_err());
        assert!(InstanceConfig::from_json(r#"{"p":1,"N":4,"window":1,"matrix":{"kind":"x"}}"#).is_err());
        let mut c = example_a();
        c.shift = "1/0".into();
        assert!(c.validate().is_err());
        let mut c = example_a();
        c.nu = NuSource::Ladder {
            lambda: vec![vec!["1".into()], vec!["1".into()]],
        };
        assert!(c.validate().is_err());
        let mut c = example_a();
        c.free_entries = FreeSource::Explicit {
            values: vec![vec!["1".into()]],
        };
        assert!(c.validate().is_err());
        let mut c = example_a();
        if let MatrixSource::Explicit { bands } = &mut c.matrix {
            bands.shift_remove("-1");
        }
        assert!(c.validate().is_err());
    }

    #[test]
    fn echo_round_trips() {
        let c = example_a();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(InstanceConfig::from_json(&text).unwrap(), c);
        assert!(
            text.starts_with(r#"{"p":1,"N":14,"C":"0","seed":0,"window":6,"matrix":{"kind":"explicit","bands":{"0":"#)
        );
    }
}
