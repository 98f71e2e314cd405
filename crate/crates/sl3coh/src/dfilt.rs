//! D-filtrations of Ẑ(μ): composition-style layer lists L̂(ν⁰) ⊗ E_δ(ν¹)^(1).
//!
//! Each restricted type has one template, written in the parameters (r, s) the
//! layer tables use. The layers of Ẑ(μ⁰ + pμ¹) are those of Ẑ(μ⁰) with every
//! ν¹ shifted by μ¹.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charring::{CharTable, Character};
use crate::error::Result;
use crate::lattice::{restricted_split, restricted_type, Prime, RestrictedType, Weight};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Delta {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "beta")]
    Beta,
}

impl Delta {
    pub fn weight(self) -> Weight {
        match self {
            Delta::Zero => Weight::ZERO,
            Delta::Alpha => Weight::ALPHA,
            Delta::Beta => Weight::BETA,
        }
    }

    /// Exchanges α and β.
    pub fn transpose(self) -> Delta {
        match self {
            Delta::Zero => Delta::Zero,
            Delta::Alpha => Delta::Beta,
            Delta::Beta => Delta::Alpha,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Delta::Zero => "0",
            Delta::Alpha => "alpha",
            Delta::Beta => "beta",
        }
    }
}

/// The B-module E_δ(ν): the weight ν itself when δ = 0, otherwise the
/// non-split extension with head ν and socle ν − δ.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EDescriptor {
    pub delta: Delta,
    pub nu: Weight,
}

impl EDescriptor {
    pub fn new(delta: Delta, nu: Weight) -> EDescriptor {
        EDescriptor { delta, nu }
    }

    pub fn weight(nu: Weight) -> EDescriptor {
        EDescriptor { delta: Delta::Zero, nu }
    }

    /// The socle weight ν − δ.
    pub fn socle(self) -> Weight {
        self.nu - self.delta.weight()
    }

    pub fn dim(self) -> usize {
        if self.delta == Delta::Zero {
            1
        } else {
            2
        }
    }

    pub fn transpose(self) -> EDescriptor {
        EDescriptor { delta: self.delta.transpose(), nu: self.nu.transpose() }
    }

    /// B-weights of the module, socle first.
    pub fn weights(self) -> Vec<Weight> {
        match self.delta {
            Delta::Zero => vec![self.nu],
            _ => vec![self.socle(), self.nu],
        }
    }
}

impl fmt::Debug for EDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.delta {
            Delta::Zero => write!(f, "{:?}", self.nu),
            Delta::Alpha => write!(f, "E_alpha{:?}", self.nu),
            Delta::Beta => write!(f, "E_beta{:?}", self.nu),
        }
    }
}

/// One layer L̂(ν⁰) ⊗ E_δ(ν¹)^(1).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DLayer {
    pub nu0: Weight,
    pub e: EDescriptor,
}

#[derive(Serialize, Deserialize)]
struct DLayerRecord {
    nu0: Weight,
    delta: Delta,
    nu1: Weight,
}

impl Serialize for DLayer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DLayerRecord { nu0: self.nu0, delta: self.e.delta, nu1: self.e.nu }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DLayer {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<DLayer, D::Error> {
        let r = DLayerRecord::deserialize(d)?;
        Ok(DLayer { nu0: r.nu0, e: EDescriptor::new(r.delta, r.nu1) })
    }
}

/// c_r·r + c_s·s + c_p·p + c.
#[derive(Copy, Clone)]
struct Lin(i64, i64, i64, i64);

impl Lin {
    fn at(self, r: i64, s: i64, p: i64) -> i64 {
        self.0 * r + self.1 * s + self.2 * p + self.3
    }
}

const R: Lin = Lin(1, 0, 0, 0);
const S: Lin = Lin(0, 1, 0, 0);
const R_BAR: Lin = Lin(-1, 0, 1, -2);
const S_BAR: Lin = Lin(0, -1, 1, -2);
const TOP: Lin = Lin(0, 0, 1, -1);
const RS1: Lin = Lin(1, 1, 0, 1);
const GAP: Lin = Lin(-1, -1, 1, -3);

struct Row(Lin, Lin, Delta, (i64, i64));

use Delta::{Alpha as A, Beta as B, Zero as Z};

const ALPHA_SING: &[Row] = &[Row(TOP, S, Z, (0, 0)), Row(S, S_BAR, A, (1, -1)), Row(S_BAR, TOP, Z, (0, -1))];

const BETA_SING: &[Row] = &[Row(R, TOP, Z, (0, 0)), Row(R_BAR, R, B, (-1, 1)), Row(TOP, R_BAR, Z, (-1, 0))];

/// μ⁰ = (r̄, s̄) with r + s ≤ p − 3.
const DELTA: &[Row] = &[
    Row(R_BAR, S_BAR, Z, (0, 0)),
    Row(S, R, Z, (0, 0)),
    Row(GAP, S, A, (1, -1)),
    Row(R, GAP, B, (-1, 1)),
    Row(RS1, R_BAR, Z, (0, -1)),
    Row(S_BAR, RS1, Z, (-1, 0)),
    Row(S, R, Z, (-1, -1)),
];

/// μ⁰ = (r, s) with r + s ≤ p − 3.
const NABLA: &[Row] = &[
    Row(R, S, Z, (0, 0)),
    Row(R_BAR, RS1, Z, (-1, 0)),
    Row(RS1, S_BAR, Z, (0, -1)),
    Row(S, GAP, A, (0, -1)),
    Row(GAP, R, B, (-1, 0)),
    Row(R, S, Z, (-1, -1)),
    Row(S_BAR, R_BAR, Z, (-1, -1)),
];

/// μ⁰ = (r, p − 2 − r).
const GAMMA_SING: &[Row] =
    &[Row(R, R_BAR, Z, (0, 0)), Row(TOP, R, Z, (0, -1)), Row(R_BAR, TOP, Z, (-1, 0)), Row(R, R_BAR, Z, (-1, -1))];

const ALPHA_BETA_SING: &[Row] = &[Row(TOP, TOP, Z, (0, 0))];

/// Template and its (r, s) parameters for a restricted weight.
fn template(mu0: Weight, p: Prime) -> (&'static [Row], i64, i64) {
    let q = p.get();
    match restricted_type(mu0, p) {
        RestrictedType::AlphaSing => (ALPHA_SING, 0, mu0.b),
        RestrictedType::BetaSing => (BETA_SING, mu0.a, 0),
        RestrictedType::Delta => (DELTA, q - 2 - mu0.a, q - 2 - mu0.b),
        RestrictedType::Nabla => (NABLA, mu0.a, mu0.b),
        RestrictedType::GammaSing => (GAMMA_SING, mu0.a, 0),
        RestrictedType::AlphaBetaSing => (ALPHA_BETA_SING, 0, 0),
    }
}

/// The D-filtration of Ẑ(μ), bottom layer first.
pub fn d_filtration(mu: Weight, p: Prime) -> Vec<DLayer> {
    let (mu0, mu1) = restricted_split(mu, p);
    let (rows, r, s) = template(mu0, p);
    let q = p.get();
    rows.iter()
        .map(|Row(x, y, delta, (u, v))| DLayer {
            nu0: Weight::new(x.at(r, s, q), y.at(r, s, q)),
            e: EDescriptor::new(*delta, Weight::new(*u, *v) + mu1),
        })
        .collect()
}

/// ch L(ν⁰) · (e^(pν¹) + [δ ≠ 0] e^(p(ν¹ − δ))).
pub fn d_layer_char(layer: &DLayer, table: &CharTable) -> Result<Character> {
    let q = table.prime().get();
    let twisted = Character::from_terms(layer.e.weights().into_iter().map(|w| (q * w, 1)))?;
    table.simple(layer.nu0)?.times(&twisted)
}
