//! JSON problem descriptions and their resolution into library values.

use crate::algebra::{parse_ratfunc, FqField, PolyRing, RatFunc};
use crate::error::{Error, Result};
use crate::group::{GroupPoint, GroupShape, ModulePresentation, Variety};
use crate::mlengine::DEFAULT_STATE_CAP;
use crate::spanning::{
    canonical_weak_spanning, verify_weak_spanning, DigitSet, SpanningCertificate, SplitRelation, DEFAULT_DIGIT_CAP,
};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const DEFAULT_DEPTH: usize = 5;
pub const DEFAULT_EXTENSION_CAP: u32 = 6;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    /// Coefficients of the defining polynomial of F_q over F_p, constant term first.
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
    pub vars: Vec<String>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub additive: usize,
    #[serde(default)]
    pub multiplicative: usize,
}

/// A point literal: one string per additive and per multiplicative coordinate.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    #[serde(default)]
    pub add: Vec<String>,
    #[serde(default)]
    pub mul: Vec<String>,
}

impl PointSpec {
    pub fn from_point(x: &GroupPoint) -> Self {
        PointSpec {
            add: x.add.iter().map(|c| c.to_string()).collect(),
            mul: x.mul.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn resolve(&self, shape: &GroupShape, label: &str) -> Result<GroupPoint> {
        let coord = |kind: &str, i: usize, s: &String| {
            parse_ratfunc(s, shape.ring())
                .map_err(|e| locate(e, &format!("{label}.{kind}[{i}]")))
        };
        let add = self.add.iter().enumerate().map(|(i, s)| coord("add", i, s)).collect::<Result<Vec<_>>>()?;
        let mul = self.mul.iter().enumerate().map(|(i, s)| coord("mul", i, s)).collect::<Result<Vec<_>>>()?;
        shape.point(add, mul).map_err(|e| locate(e, label))
    }
}

/// A digit set on disk or inline.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DigitSetSpec {
    #[serde(default = "one")]
    pub r: u32,
    pub digits: Vec<PointSpec>,
}

impl DigitSetSpec {
    pub fn from_digit_set(sigma: &DigitSet) -> Self {
        DigitSetSpec { r: sigma.r(), digits: sigma.digits().iter().map(PointSpec::from_point).collect() }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    /// Frobenius exponent for a custom digit set.
    #[serde(default)]
    pub r: Option<u32>,
    #[serde(default)]
    pub digits: Option<Vec<PointSpec>>,
    /// Path to a digit-set JSON file, relative to the problem file.
    #[serde(default)]
    pub digit_set: Option<PathBuf>,
    #[serde(default)]
    pub digit_cap: Option<usize>,
    #[serde(default)]
    pub state_cap: Option<usize>,
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default)]
    pub extension_cap: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub field: FieldSpec,
    pub group: GroupSpec,
    pub generators: Vec<PointSpec>,
    #[serde(default)]
    pub variety: Vec<String>,
    #[serde(default)]
    pub options: OptionsSpec,
}

/// Settings after defaults are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub state_cap: usize,
    pub depth: usize,
    pub extension_cap: u32,
}

/// A validated problem: G, Γ, X and the digit set Σ.
#[derive(Clone, Debug)]
pub struct Problem {
    pub shape: GroupShape,
    pub module: ModulePresentation,
    pub variety: Variety,
    pub sigma: DigitSet,
    pub certificate: SpanningCertificate,
    pub settings: Settings,
}

fn locate(e: Error, label: &str) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos, msg: format!("{label}: {msg}") },
        Error::Validation(msg) => Error::Validation(format!("{label}: {msg}")),
        other => other,
    }
}

impl ProblemSpec {
    pub fn from_json(src: &str) -> Result<Self> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json(&src)?, base))
    }

    pub fn shape(&self) -> Result<GroupShape> {
        let f = &self.field;
        let field = match (&f.modulus, f.e) {
            (Some(m), e) => FqField::new(f.p, e, Some(m.clone())),
            (None, 1) => FqField::prime(f.p),
            (None, e) => FqField::with_default_modulus(f.p, e),
        }
        .map_err(|e| locate(e, "field"))?;
        if f.vars.is_empty() {
            return Err(Error::validation("field.vars: at least one transcendental is needed"));
        }
        let ring = PolyRing::new(field, f.vars.clone());
        GroupShape::new(self.group.additive, self.group.multiplicative, ring).map_err(|e| locate(e, "group"))
    }

    /// Validates everything and builds or verifies Σ. Relative digit-set
    /// paths are resolved against `base_dir`.
    pub fn resolve(&self, base_dir: &Path) -> Result<Problem> {
        let shape = self.shape()?;
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| g.resolve(&shape, &format!("generators[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let module = ModulePresentation::new(gens)?;
        let polys: Vec<_> = self
            .variety
            .iter()
            .enumerate()
            .map(|(i, s)| Variety::parse(&shape, std::slice::from_ref(s)).map_err(|e| locate(e, &format!("variety[{i}]"))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flat_map(|v| v.polys().to_vec())
            .collect();
        let variety = Variety::new(&shape, polys);
        let o = &self.options;
        let custom = match (&o.digits, &o.digit_set) {
            (Some(_), Some(_)) => return Err(Error::validation("options: give digits or digit_set, not both")),
            (Some(d), None) => Some(DigitSetSpec { r: o.r.unwrap_or(1), digits: d.clone() }),
            (None, Some(path)) => {
                let full = base_dir.join(path);
                let src = std::fs::read_to_string(&full).map_err(|e| Error::Io(format!("{}: {e}", full.display())))?;
                let mut spec: DigitSetSpec = serde_json::from_str(&src)?;
                if let Some(r) = o.r {
                    spec.r = r;
                }
                Some(spec)
            }
            (None, None) => None,
        };
        let (sigma, certificate) = match custom {
            Some(spec) => {
                let digits = spec
                    .digits
                    .iter()
                    .enumerate()
                    .map(|(i, d)| d.resolve(&shape, &format!("digits[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let sigma = DigitSet::new(&shape, spec.r, digits)?;
                let cert = verify_weak_spanning(&sigma, &module)?;
                (sigma, cert)
            }
            None => {
                let ell = SplitRelation::for_field(shape.p(), shape.q()).ell;
                if o.r.is_some_and(|r| r != ell) {
                    return Err(Error::validation(format!(
                        "options.r: the constructed digit set uses r = {ell}; supply custom digits for another r"
                    )));
                }
                canonical_weak_spanning(&module, &shape, o.digit_cap.unwrap_or(DEFAULT_DIGIT_CAP))?
            }
        };
        let settings = Settings {
            state_cap: o.state_cap.unwrap_or(DEFAULT_STATE_CAP),
            depth: o.depth.unwrap_or(DEFAULT_DEPTH),
            extension_cap: o.extension_cap.unwrap_or(DEFAULT_EXTENSION_CAP),
        };
        Ok(Problem { shape, module, variety, sigma, certificate, settings })
    }

    /// Generators of a G_a^1 problem as elements of K.
    pub fn additive_generators(&self) -> Result<Vec<RatFunc>> {
        if self.group.additive != 1 || self.group.multiplicative != 0 {
            return Err(Error::validation("group: hull computation needs additive = 1, multiplicative = 0"));
        }
        let shape = self.shape()?;
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| g.resolve(&shape, &format!("generators[{i}]")).map(|p| p.add[0].clone()))
            .collect()
    }
}
