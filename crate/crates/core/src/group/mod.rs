//! The split group G = G_a^a × G_m^b over F_q, its K-points, Frobenius, and
//! subvarieties given on the single affine/torus chart.

mod variety;

pub use variety::{normalize_poly, translate_poly, variety_contains, variety_translate, Variety};

use crate::algebra::{HeightContext, KPolyRing, KRing, RatFunc, Ring};
use crate::error::{Error, Result};
use std::fmt;

/// Ranks of the additive and multiplicative factors over a fixed K.
#[derive(Clone, Debug)]
pub struct GroupShape {
    a: usize,
    b: usize,
    ring: Ring,
    coords: KRing,
}

impl PartialEq for GroupShape {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.ring == other.ring
    }
}
impl Eq for GroupShape {}

impl GroupShape {
    pub fn new(a: usize, b: usize, ring: Ring) -> Result<Self> {
        if a + b == 0 {
            return Err(Error::validation("group must have positive dimension"));
        }
        let mut vars: Vec<String> = (1..=a).map(|i| format!("x{i}")).collect();
        vars.extend((1..=b).map(|j| format!("y{j}")));
        if vars.iter().any(|v| ring.vars.contains(v)) {
            return Err(Error::validation("field variable names clash with group coordinates"));
        }
        let coords = KPolyRing::new(ring.clone(), vars);
        Ok(GroupShape { a, b, ring, coords })
    }

    pub fn additive(&self) -> usize {
        self.a
    }
    pub fn multiplicative(&self) -> usize {
        self.b
    }
    pub fn dim(&self) -> usize {
        self.a + self.b
    }
    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn q(&self) -> u32 {
        self.ring.q()
    }
    pub fn p(&self) -> u32 {
        self.ring.field.p()
    }
    /// Polynomial ring in x_1..x_a, y_1..y_b over K.
    pub fn coords(&self) -> &KRing {
        &self.coords
    }
    /// Indices of the multiplicative coordinates (the Laurent ones).
    pub fn laurent_vars(&self) -> Vec<usize> {
        (self.a..self.a + self.b).collect()
    }
    pub fn additive_vars(&self) -> Vec<usize> {
        (0..self.a).collect()
    }

    pub fn identity(&self) -> GroupPoint {
        GroupPoint { add: vec![RatFunc::zero(&self.ring); self.a], mul: vec![RatFunc::one(&self.ring); self.b] }
    }

    /// Checks coordinate counts and that multiplicative coordinates are units.
    pub fn point(&self, add: Vec<RatFunc>, mul: Vec<RatFunc>) -> Result<GroupPoint> {
        if add.len() != self.a || mul.len() != self.b {
            return Err(Error::validation(format!(
                "point has {}+{} coordinates, group expects {}+{}",
                add.len(),
                mul.len(),
                self.a,
                self.b
            )));
        }
        if mul.iter().any(|c| c.is_zero()) {
            return Err(Error::validation("multiplicative coordinate is zero"));
        }
        Ok(GroupPoint { add, mul })
    }
}

/// An element of G(K): additive coordinates, then nonzero multiplicative ones.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupPoint {
    pub add: Vec<RatFunc>,
    pub mul: Vec<RatFunc>,
}

impl GroupPoint {
    pub fn coords(&self) -> impl Iterator<Item = &RatFunc> {
        self.add.iter().chain(&self.mul)
    }

    pub fn is_identity(&self) -> bool {
        self.add.iter().all(|c| c.is_zero()) && self.mul.iter().all(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        GroupPoint {
            add: self.add.iter().zip(&other.add).map(|(x, y)| x.add(y)).collect(),
            mul: self.mul.iter().zip(&other.mul).map(|(x, y)| x.mul(y)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        GroupPoint {
            add: self.add.iter().map(|x| x.neg()).collect(),
            mul: self.mul.iter().map(|x| x.inv().expect("unit coordinate")).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// n·x: additive coordinates times n mod p, multiplicative ones to the n-th power.
    pub fn scalar_mul(&self, n: i64) -> Self {
        GroupPoint {
            add: self.add.iter().map(|x| x.scale(x.field().from_i64(n))).collect(),
            mul: self.mul.iter().map(|x| x.pow(n).expect("unit coordinate")).collect(),
        }
    }

    /// F^n.
    pub fn frob(&self, n: u32) -> Self {
        GroupPoint {
            add: self.add.iter().map(|x| x.frobenius(n)).collect(),
            mul: self.mul.iter().map(|x| x.frobenius(n)).collect(),
        }
    }

    /// F^{-n} when every coordinate is a q^n-th power.
    pub fn frob_root(&self, n: u32) -> Option<Self> {
        Some(GroupPoint {
            add: self.add.iter().map(|x| x.qpow_root(n)).collect::<Option<_>>()?,
            mul: self.mul.iter().map(|x| x.qpow_root(n)).collect::<Option<_>>()?,
        })
    }

    /// Max over coordinates of max(deg num, deg den).
    pub fn degree_height(&self) -> u64 {
        self.coords().map(|c| c.degree_height()).max().unwrap_or(0)
    }

    pub fn height(&self, ctx: &HeightContext) -> u64 {
        self.coords().map(|c| crate::algebra::height(c, ctx)).max().unwrap_or(0)
    }

    /// Max total degree of numerators and denominators over all coordinates.
    pub fn max_coord_degree(&self) -> u64 {
        self.degree_height()
    }

    pub fn embed(&self, target: &Ring) -> Self {
        GroupPoint {
            add: self.add.iter().map(|x| x.embed(target)).collect(),
            mul: self.mul.iter().map(|x| x.embed(target)).collect(),
        }
    }

    /// Values in coordinate order x_1..x_a, y_1..y_b.
    pub fn values(&self) -> Vec<RatFunc> {
        self.coords().cloned().collect()
    }
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[RatFunc]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "([{}], [{}])", join(&self.add), join(&self.mul))
    }
}

impl fmt::Debug for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Same shape as a point literal in problem files.
impl serde::Serialize for GroupPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let strings = |v: &[RatFunc]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("GroupPoint", 2)?;
        st.serialize_field("add", &strings(&self.add))?;
        st.serialize_field("mul", &strings(&self.mul))?;
        st.end()
    }
}

pub fn point_add(x: &GroupPoint, y: &GroupPoint) -> GroupPoint {
    x.add(y)
}

pub fn point_neg(x: &GroupPoint) -> GroupPoint {
    x.neg()
}

pub fn point_frob(x: &GroupPoint, n: u32) -> GroupPoint {
    x.frob(n)
}

/// Generators u_1..u_s of a Z[F]-submodule Γ of G(K).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    generators: Vec<GroupPoint>,
}

impl ModulePresentation {
    pub fn new(generators: Vec<GroupPoint>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::validation("module needs at least one generator"));
        }
        Ok(ModulePresentation { generators })
    }

    pub fn generators(&self) -> &[GroupPoint] {
        &self.generators
    }
}
