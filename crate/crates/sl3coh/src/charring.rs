//! The character ring Z[X(T)]: sparse exact arithmetic, Euler characters via
//! Kostant's multiplicity formula, simple characters via Steinberg's tensor
//! product theorem, and decomposition of module characters into simples.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{to_dominant_dot, DotOrbit, Prime, Weight, WeylElement};

/// A finitely supported map from weights to integers, kept sorted by weight
/// with no zero entries.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Character {
    terms: Vec<(Weight, i64)>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, m)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *m == 1 {
                write!(f, "e{w:?}")?;
            } else {
                write!(f, "{m}e{w:?}")?;
            }
        }
        Ok(())
    }
}

fn merge_sorted(mut raw: Vec<(Weight, i64)>) -> Result<Vec<(Weight, i64)>> {
    raw.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(Weight, i64)> = Vec::with_capacity(raw.len());
    for (w, m) in raw {
        match out.last_mut() {
            Some(last) if last.0 == w => {
                last.1 = last.1.checked_add(m).ok_or(Error::ArithmeticOverflow)?;
            }
            _ => out.push((w, m)),
        }
    }
    out.retain(|t| t.1 != 0);
    Ok(out)
}

impl Character {
    pub fn zero() -> Character {
        Character::default()
    }

    pub fn monomial(w: Weight) -> Character {
        Character { terms: vec![(w, 1)] }
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(terms: I) -> Result<Character> {
        Ok(Character { terms: merge_sorted(terms.into_iter().collect())? })
    }

    pub fn terms(&self) -> &[(Weight, i64)] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (Weight, i64)> + '_ {
        self.terms.iter().copied()
    }

    pub fn get(&self, w: Weight) -> i64 {
        match self.terms.binary_search_by_key(&w, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of weights in the support.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> i128 {
        self.terms.iter().map(|t| t.1 as i128).sum()
    }

    pub fn is_genuine(&self) -> bool {
        self.terms.iter().all(|t| t.1 > 0)
    }

    pub fn max_multiplicity(&self) -> i64 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0)
    }

    /// Coefficient-wise ≤.
    pub fn le(&self, other: &Character) -> bool {
        match other.minus(self) {
            Ok(diff) => diff.is_genuine(),
            Err(_) => false,
        }
    }

    pub fn plus(&self, other: &Character) -> Result<Character> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.terms, &other.terms);
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(x[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(y[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let m = x[i].1.checked_add(y[j].1).ok_or(Error::ArithmeticOverflow)?;
                    if m != 0 {
                        out.push((x[i].0, m));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&x[i..]);
        out.extend_from_slice(&y[j..]);
        Ok(Character { terms: out })
    }

    pub fn minus(&self, other: &Character) -> Result<Character> {
        self.plus(&other.scale(-1)?)
    }

    pub fn scale(&self, k: i64) -> Result<Character> {
        if k == 0 {
            return Ok(Character::zero());
        }
        let terms = self
            .terms
            .iter()
            .map(|&(w, m)| m.checked_mul(k).map(|v| (w, v)).ok_or(Error::ArithmeticOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Character { terms })
    }

    /// Ring product (convolution).
    pub fn times(&self, other: &Character) -> Result<Character> {
        if self.is_zero() || other.is_zero() {
            return Ok(Character::zero());
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(w1, m1) in &self.terms {
            for &(w2, m2) in &other.terms {
                let m = m1.checked_mul(m2).ok_or(Error::ArithmeticOverflow)?;
                raw.push((w1.checked_add(w2)?, m));
            }
        }
        Ok(Character { terms: merge_sorted(raw)? })
    }

    /// Multiplication by e^w.
    pub fn shift(&self, w: Weight) -> Result<Character> {
        let terms = self.terms.iter().map(|&(v, m)| v.checked_add(w).map(|x| (x, m))).collect::<Result<Vec<_>>>()?;
        Ok(Character { terms })
    }

    /// Frobenius twist: e^ν ↦ e^(p^d ν).
    pub fn twist(&self, d: u32, p: Prime) -> Result<Character> {
        let q = p.pow(d)?;
        let terms = self.terms.iter().map(|&(v, m)| v.checked_scale(q).map(|x| (x, m))).collect::<Result<Vec<_>>>()?;
        Ok(Character { terms })
    }

    /// e^(a,b) ↦ e^(b,a).
    pub fn transpose(&self) -> Character {
        let mut terms: Vec<_> = self.terms.iter().map(|&(w, m)| (w.transpose(), m)).collect();
        terms.sort_unstable_by_key(|t| t.0);
        Character { terms }
    }

    /// e^ν ↦ e^(−ν).
    pub fn dual(&self) -> Character {
        let terms = self.terms.iter().rev().map(|&(w, m)| (-w, m)).collect();
        Character { terms }
    }

    pub fn dominant_part(&self) -> impl Iterator<Item = (Weight, i64)> + '_ {
        self.iter().filter(|(w, _)| w.is_dominant())
    }

    /// Invariance under the ordinary action of s_α and s_β.
    pub fn is_w_invariant(&self) -> bool {
        self.terms
            .iter()
            .all(|&(w, m)| self.get(WeylElement::S_ALPHA.apply(w)) == m && self.get(WeylElement::S_BETA.apply(w)) == m)
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    w: Weight,
    m: i64,
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|&(w, m)| Term { w, m }))
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Character, D::Error> {
        let raw = Vec::<Term>::deserialize(d)?;
        Character::from_terms(raw.into_iter().map(|t| (t.w, t.m))).map_err(serde::de::Error::custom)
    }
}

pub fn convolve(f: &Character, g: &Character) -> Result<Character> {
    f.times(g)
}

pub fn twist(f: &Character, d: u32, p: Prime) -> Result<Character> {
    f.twist(d, p)
}

pub fn transpose(f: &Character) -> Character {
    f.transpose()
}

pub fn dual(f: &Character) -> Character {
    f.dual()
}

/// Number of ways to write xα + yβ as a sum of positive roots.
pub fn kostant_partition(x: i64, y: i64) -> i64 {
    if x < 0 || y < 0 {
        0
    } else {
        x.min(y) + 1
    }
}

fn w_orbit(w: Weight) -> Vec<Weight> {
    let mut orbit: Vec<Weight> = WeylElement::all().iter().map(|g| g.apply(w)).collect();
    orbit.sort_unstable();
    orbit.dedup();
    orbit
}

fn dominant_chi(lambda: Weight) -> Character {
    debug_assert!(lambda.is_dominant());
    let shifted = lambda + Weight::RHO;
    let images: Vec<(Weight, i64)> = WeylElement::all().iter().map(|w| (w.apply(shifted), w.sign())).collect();
    let depth = lambda.a + lambda.b;
    let mut terms = Vec::new();
    for i in 0..=depth {
        for j in 0..=depth {
            let nu = lambda - i * Weight::ALPHA - j * Weight::BETA;
            if !nu.is_dominant() {
                continue;
            }
            let target = nu + Weight::RHO;
            let mult: i64 = images
                .iter()
                .map(|&(img, sign)| {
                    let (x, y) = (img - target).root_coords().expect("same coset of the root lattice");
                    sign * kostant_partition(x, y)
                })
                .sum();
            if mult != 0 {
                for w in w_orbit(nu) {
                    terms.push((w, mult));
                }
            }
        }
    }
    terms.sort_unstable_by_key(|t| t.0);
    Character { terms }
}

/// Euler characteristic Σ(−1)^i ch H^i(μ). Independent of p.
pub fn chi(mu: Weight) -> Character {
    match to_dominant_dot(mu) {
        DotOrbit::Singular => Character::zero(),
        DotOrbit::Regular { dominant, sign, .. } => {
            let c = dominant_chi(dominant);
            if sign == 1 {
                c
            } else {
                c.scale(-1).expect("negation of a Kostant multiplicity")
            }
        }
    }
}

/// ch V(λ): χ(λ) for dominant λ, else 0.
pub fn weyl_module_char(lambda: Weight) -> Character {
    if lambda.is_dominant() {
        dominant_chi(lambda)
    } else {
        Character::zero()
    }
}

pub fn weyl_dimension(lambda: Weight) -> i128 {
    let (a, b) = (lambda.a as i128, lambda.b as i128);
    (a + 1) * (b + 1) * (a + b + 2) / 2
}

fn restricted_simple(lambda: Weight, p: Prime, chi_of: &dyn Fn(Weight) -> Arc<Character>) -> Result<Character> {
    let q = p.get();
    let base = chi_of(lambda);
    if lambda.a + lambda.b <= q - 2 {
        return Ok((*base).clone());
    }
    let reflected = Weight::new(q - lambda.b - 2, q - lambda.a - 2);
    base.minus(&chi_of(reflected))
}

/// p-adic digits of a dominant weight, least significant first.
pub fn weight_digits(lambda: Weight, p: Prime) -> Vec<Weight> {
    let q = p.get();
    let (mut a, mut b) = (lambda.a, lambda.b);
    let mut out = Vec::new();
    while a > 0 || b > 0 {
        out.push(Weight::new(a % q, b % q));
        a /= q;
        b /= q;
    }
    out
}

/// Simple constituents (λ, multiplicity).
type Factors = Vec<(Weight, i64)>;

/// Memo tables for χ and simple characters at a fixed prime.
pub struct CharTable {
    p: Prime,
    chi: RwLock<HashMap<Weight, Arc<Character>>>,
    simple: RwLock<HashMap<Weight, Arc<Character>>>,
    simple_dominant: RwLock<HashMap<Weight, Arc<Factors>>>,
}

impl CharTable {
    pub fn new(p: Prime) -> CharTable {
        CharTable {
            p,
            chi: RwLock::new(HashMap::new()),
            simple: RwLock::new(HashMap::new()),
            simple_dominant: RwLock::new(HashMap::new()),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// χ(λ) for dominant λ, memoized.
    fn dominant_chi(&self, lambda: Weight) -> Arc<Character> {
        if let Some(c) = self.chi.read().unwrap().get(&lambda) {
            return c.clone();
        }
        let c = Arc::new(dominant_chi(lambda));
        self.chi.write().unwrap().entry(lambda).or_insert(c).clone()
    }

    pub fn chi(&self, mu: Weight) -> Result<Arc<Character>> {
        match to_dominant_dot(mu) {
            DotOrbit::Singular => Ok(Arc::new(Character::zero())),
            DotOrbit::Regular { dominant, sign, .. } => {
                let c = self.dominant_chi(dominant);
                if sign == 1 {
                    Ok(c)
                } else {
                    Ok(Arc::new(c.scale(-1)?))
                }
            }
        }
    }

    pub fn weyl(&self, lambda: Weight) -> Arc<Character> {
        if lambda.is_dominant() {
            self.dominant_chi(lambda)
        } else {
            Arc::new(Character::zero())
        }
    }

    pub fn simple(&self, lambda: Weight) -> Result<Arc<Character>> {
        if !lambda.is_dominant() {
            return Ok(Arc::new(Character::zero()));
        }
        if let Some(c) = self.simple.read().unwrap().get(&lambda) {
            return Ok(c.clone());
        }
        let chi_of = |w: Weight| self.weyl(w);
        let mut out = Character::monomial(Weight::ZERO);
        for (i, digit) in weight_digits(lambda, self.p).into_iter().enumerate() {
            if digit == Weight::ZERO {
                continue;
            }
            let piece = restricted_simple(digit, self.p, &chi_of)?.twist(i as u32, self.p)?;
            out = out.times(&piece)?;
        }
        let c = Arc::new(out);
        Ok(self.simple.write().unwrap().entry(lambda).or_insert(c).clone())
    }

    fn simple_dominant(&self, lambda: Weight) -> Result<Arc<Factors>> {
        if let Some(c) = self.simple_dominant.read().unwrap().get(&lambda) {
            return Ok(c.clone());
        }
        let c = Arc::new(self.simple(lambda)?.dominant_part().collect::<Vec<_>>());
        Ok(self.simple_dominant.write().unwrap().entry(lambda).or_insert(c).clone())
    }

    /// Multiplicities [f : L(λ)], highest weights first.
    pub fn decompose(&self, f: &Character) -> Result<Vec<(Weight, i64)>> {
        if !f.is_w_invariant() {
            return Err(Error::NotAModuleCharacter("character is not W-invariant".into()));
        }
        let key = |w: Weight| (w.a + w.b, w);
        let mut work: BTreeMap<(i64, Weight), i64> = f.dominant_part().map(|(w, m)| (key(w), m)).collect();
        let mut out = Vec::new();
        while let Some((&(_, lambda), &m)) = work.iter().next_back() {
            work.remove(&key(lambda));
            if m < 0 {
                return Err(Error::NotAModuleCharacter(format!(
                    "negative multiplicity {m} at maximal weight {lambda}"
                )));
            }
            for &(w, k) in self.simple_dominant(lambda)?.iter() {
                if w == lambda {
                    continue;
                }
                let slot = work.entry(key(w)).or_insert(0);
                *slot = slot
                    .checked_sub(k.checked_mul(m).ok_or(Error::ArithmeticOverflow)?)
                    .ok_or(Error::ArithmeticOverflow)?;
                if *slot == 0 {
                    work.remove(&key(w));
                }
            }
            out.push((lambda, m));
        }
        Ok(out)
    }
}

/// ch L(λ) by Steinberg's tensor product theorem; 0 for non-dominant λ.
pub fn simple_char(lambda: Weight, p: Prime) -> Character {
    let table = CharTable::new(p);
    (*table.simple(lambda).expect("simple characters of representable weights fit in i64")).clone()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleDecomposition {
    pub factors: Vec<(Weight, i64)>,
}

pub fn simple_decompose(f: &Character, p: Prime) -> Result<SimpleDecomposition> {
    Ok(SimpleDecomposition { factors: CharTable::new(p).decompose(f)? })
}

/// ch Ẑ(μ) = e^μ · Π_{δ ∈ {α,β,γ}} Σ_{i<p} e^(−iδ).
pub fn zhat_char(mu: Weight, p: Prime) -> Result<Character> {
    let mut out = Character::monomial(mu);
    for root in [Weight::ALPHA, Weight::BETA, Weight::GAMMA] {
        let factor = Character::from_terms((0..p.get()).map(|i| (-(i * root), 1)))?;
        out = out.times(&factor)?;
    }
    Ok(out)
}

/// Every weight of the support, deduplicated; handy for tests.
pub fn support(f: &Character) -> HashSet<Weight> {
    f.iter().map(|t| t.0).collect()
}
