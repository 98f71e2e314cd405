//! Weight lattice of SL3 in fundamental-weight coordinates, the Weyl group and
//! its dot action, base-p degrees, and the region/type/Griffith classification.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A prime characteristic. Construction checks primality.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(i64);

impl Prime {
    pub fn new(p: i64) -> Result<Prime> {
        if p < 2 {
            return Err(Error::InvalidPrime(p));
        }
        let mut k = 2;
        while k * k <= p {
            if p % k == 0 {
                return Err(Error::InvalidPrime(p));
            }
            k += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// p^d, or `ArithmeticOverflow`.
    pub fn pow(self, d: u32) -> Result<i64> {
        self.0.checked_pow(d).ok_or(Error::ArithmeticOverflow)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The weight a·ω₁ + b·ω₂. Ordered lexicographically on (a, b).
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight {
    pub a: i64,
    pub b: i64,
}

impl Weight {
    pub const ZERO: Weight = Weight { a: 0, b: 0 };
    pub const ALPHA: Weight = Weight { a: 2, b: -1 };
    pub const BETA: Weight = Weight { a: -1, b: 2 };
    pub const GAMMA: Weight = Weight { a: 1, b: 1 };
    pub const RHO: Weight = Weight { a: 1, b: 1 };

    pub const fn new(a: i64, b: i64) -> Weight {
        Weight { a, b }
    }

    pub fn is_dominant(self) -> bool {
        self.a >= 0 && self.b >= 0
    }

    /// (a, b) with a, b ≤ −2, i.e. w₀·λ for a dominant λ.
    pub fn is_antidominant(self) -> bool {
        self.a <= -2 && self.b <= -2
    }

    /// (a, b) ↦ (b, a), the diagram automorphism exchanging α and β.
    pub fn transpose(self) -> Weight {
        Weight::new(self.b, self.a)
    }

    /// w₀·μ = (−b−2, −a−2).
    pub fn w0_dot(self) -> Weight {
        Weight::new(-self.b - 2, -self.a - 2)
    }

    /// −2ρ − μ, the Serre-dual weight.
    pub fn serre_dual(self) -> Weight {
        Weight::new(-2 - self.a, -2 - self.b)
    }

    /// Coordinates in the root basis, when μ lies in the root lattice.
    pub fn root_coords(self) -> Option<(i64, i64)> {
        let x = 2 * self.a + self.b;
        let y = self.a + 2 * self.b;
        if x % 3 == 0 && y % 3 == 0 {
            Some((x / 3, y / 3))
        } else {
            None
        }
    }

    pub fn checked_scale(self, k: i64) -> Result<Weight> {
        match (self.a.checked_mul(k), self.b.checked_mul(k)) {
            (Some(a), Some(b)) => Ok(Weight::new(a, b)),
            _ => Err(Error::ArithmeticOverflow),
        }
    }

    pub fn checked_add(self, o: Weight) -> Result<Weight> {
        match (self.a.checked_add(o.a), self.b.checked_add(o.b)) {
            (Some(a), Some(b)) => Ok(Weight::new(a, b)),
            _ => Err(Error::ArithmeticOverflow),
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::new(-self.a, -self.b)
    }
}

impl Mul<Weight> for i64 {
    type Output = Weight;
    fn mul(self, w: Weight) -> Weight {
        Weight::new(self * w.a, self * w.b)
    }
}

impl From<(i64, i64)> for Weight {
    fn from((a, b): (i64, i64)) -> Weight {
        Weight::new(a, b)
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Weight, D::Error> {
        let [a, b] = <[i64; 2]>::deserialize(d)?;
        Ok(Weight::new(a, b))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Root {
    Alpha,
    Beta,
    Gamma,
}

impl Root {
    pub fn weight(self) -> Weight {
        match self {
            Root::Alpha => Weight::ALPHA,
            Root::Beta => Weight::BETA,
            Root::Gamma => Weight::GAMMA,
        }
    }
}

/// ⟨μ, δ∨⟩.
pub fn pairing(mu: Weight, root: Root) -> i64 {
    match root {
        Root::Alpha => mu.a,
        Root::Beta => mu.b,
        Root::Gamma => mu.a + mu.b,
    }
}

/// An element of W = S₃, stored as its matrix on (a, b) coordinates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    m: [[i64; 2]; 2],
    length: u8,
}

impl WeylElement {
    pub const IDENTITY: WeylElement = WeylElement { m: [[1, 0], [0, 1]], length: 0 };
    pub const S_ALPHA: WeylElement = WeylElement { m: [[-1, 0], [1, 1]], length: 1 };
    pub const S_BETA: WeylElement = WeylElement { m: [[1, 1], [0, -1]], length: 1 };
    pub const W0: WeylElement = WeylElement { m: [[0, -1], [-1, 0]], length: 3 };

    pub fn all() -> [WeylElement; 6] {
        let sa = Self::S_ALPHA;
        let sb = Self::S_BETA;
        [Self::IDENTITY, sa, sb, sa.compose(sb), sb.compose(sa), Self::W0]
    }

    pub fn length(self) -> u8 {
        self.length
    }

    pub fn sign(self) -> i64 {
        if self.length.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// self ∘ other. Length is recomputed from the matrix.
    pub fn compose(self, other: WeylElement) -> WeylElement {
        let a = self.m;
        let b = other.m;
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        WeylElement { m, length: length_of(m) }
    }

    pub fn apply(self, w: Weight) -> Weight {
        Weight::new(self.m[0][0] * w.a + self.m[0][1] * w.b, self.m[1][0] * w.a + self.m[1][1] * w.b)
    }

    /// w·μ = w(μ + ρ) − ρ.
    pub fn dot(self, w: Weight) -> Weight {
        self.apply(w + Weight::RHO) - Weight::RHO
    }
}

fn length_of(m: [[i64; 2]; 2]) -> u8 {
    // Number of positive roots sent to negative roots.
    let elt = WeylElement { m, length: 0 };
    [Weight::ALPHA, Weight::BETA, Weight::GAMMA]
        .iter()
        .filter(|&&r| {
            let (x, y) = elt.apply(r).root_coords().expect("roots stay in the root lattice");
            x < 0 || y < 0
        })
        .count() as u8
}

/// Result of moving μ into the closed dominant chamber by the dot action.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DotOrbit {
    /// μ + ρ is orthogonal to some coroot.
    Singular,
    /// `element · dominant = μ` and `sign = (−1)^ℓ(element)`.
    Regular { dominant: Weight, sign: i64, element: WeylElement },
}

pub fn to_dominant_dot(mu: Weight) -> DotOrbit {
    let mut v = mu + Weight::RHO;
    if v.a == 0 || v.b == 0 || v.a + v.b == 0 {
        return DotOrbit::Singular;
    }
    let mut w = WeylElement::IDENTITY;
    loop {
        if v.a < 0 {
            v = WeylElement::S_ALPHA.apply(v);
            w = w.compose(WeylElement::S_ALPHA);
        } else if v.b < 0 {
            v = WeylElement::S_BETA.apply(v);
            w = w.compose(WeylElement::S_BETA);
        } else {
            break;
        }
    }
    DotOrbit::Regular { dominant: v - Weight::RHO, sign: w.sign(), element: w }
}

/// Degree of n ≥ 0: the d with p^d ≤ n < p^(d+1); `None` stands for −∞ (n = 0).
pub fn degree(n: i64, p: Prime) -> Option<u32> {
    if n <= 0 {
        return None;
    }
    let mut d = 0;
    let mut q = p.get();
    while q <= n {
        d += 1;
        match q.checked_mul(p.get()) {
            Some(next) => q = next,
            None => break,
        }
    }
    Some(d)
}

/// Degree of a weight: that of a+b+1 for the representative (a, b) of W·μ with
/// a, b ≥ −1. For μ = (m, −n−2) this is the degree of max(m, n).
pub fn weight_degree(mu: Weight, p: Prime) -> Option<u32> {
    let mut v = mu + Weight::RHO;
    loop {
        if v.a < 0 {
            v = WeylElement::S_ALPHA.apply(v);
        } else if v.b < 0 {
            v = WeylElement::S_BETA.apply(v);
        } else {
            break;
        }
    }
    degree(v.a + v.b - 1, p)
}

/// x = a·p^d + r with a the leading base-p digit. Requires x ≥ 1.
pub fn leading_split(x: i64, p: Prime) -> Result<(u32, i64, i64)> {
    if x < 1 {
        return Err(domain(format!("leading_split needs x >= 1, got {x}")));
    }
    let d = degree(x, p).expect("x >= 1 has a finite degree");
    let q = p.pow(d)?;
    Ok((d, x / q, x % q))
}

/// x = high·p^d + low with 0 ≤ low < p^d.
pub fn digit_split(x: i64, p: Prime, d: u32) -> Result<(i64, i64)> {
    if x < 0 {
        return Err(domain(format!("digit_split needs x >= 0, got {x}")));
    }
    let q = p.pow(d)?;
    Ok((x / q, x % q))
}

/// Base-p digits, least significant first. Empty for 0.
pub fn digits(mut x: i64, p: Prime) -> Vec<i64> {
    let mut out = Vec::new();
    while x > 0 {
        out.push(x % p.get());
        x /= p.get();
    }
    out
}

/// μ = μ⁰ + p·μ¹ with μ⁰ restricted.
pub fn restricted_split(mu: Weight, p: Prime) -> (Weight, Weight) {
    let q = p.get();
    let hi = Weight::new(mu.a.div_euclid(q), mu.b.div_euclid(q));
    let lo = Weight::new(mu.a.rem_euclid(q), mu.b.rem_euclid(q));
    (lo, hi)
}

/// v_p(x) for x ≠ 0; 0 is reported as `u32::MAX`.
pub fn valuation(mut x: i64, p: Prime) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut k = 0;
    while x % p.get() == 0 {
        x /= p.get();
        k += 1;
    }
    k
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Singular,
    Dominant,
    AntiDominant,
    H1Chamber,
    H2Chamber,
    GammaWall,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RestrictedType {
    Delta,
    Nabla,
    AlphaSing,
    BetaSing,
    GammaSing,
    AlphaBetaSing,
}

impl RestrictedType {
    pub fn tag(self) -> &'static str {
        match self {
            RestrictedType::Delta => "Delta",
            RestrictedType::Nabla => "Nabla",
            RestrictedType::AlphaSing => "AlphaSing",
            RestrictedType::BetaSing => "BetaSing",
            RestrictedType::GammaSing => "GammaSing",
            RestrictedType::AlphaBetaSing => "AlphaBetaSing",
        }
    }
}

/// Type of a restricted weight (r, s), 0 ≤ r, s ≤ p−1.
pub fn restricted_type(mu0: Weight, p: Prime) -> RestrictedType {
    let top = p.get() - 1;
    let (r, s) = (mu0.a, mu0.b);
    debug_assert!((0..=top).contains(&r) && (0..=top).contains(&s));
    match (r == top, s == top) {
        (true, true) => RestrictedType::AlphaBetaSing,
        (true, false) => RestrictedType::AlphaSing,
        (false, true) => RestrictedType::BetaSing,
        (false, false) => match (r + s).cmp(&(top - 1)) {
            std::cmp::Ordering::Greater => RestrictedType::Delta,
            std::cmp::Ordering::Less => RestrictedType::Nabla,
            std::cmp::Ordering::Equal => RestrictedType::GammaSing,
        },
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Griffith {
    None,
    Gr,
    GrBarOnly,
    GrHatOnly,
}

/// Window data: m = a·p^d + r, n = a·p^d + s for the normalized pair (m, n).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub d: u32,
    pub a: i64,
    pub r: i64,
    pub s: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub weight: Weight,
    pub region: Region,
    pub restricted_type: RestrictedType,
    /// `None` is degree −∞.
    pub degree: Option<u32>,
    pub griffith: Griffith,
    pub window: Option<Window>,
    pub mu0: Weight,
    pub mu1: Weight,
}

/// (m, n, transposed) when μ = (m, −n−2) (or its transpose when `transposed`)
/// with m, n ≥ 0.
pub fn chamber_pair(mu: Weight) -> Option<(i64, i64, bool)> {
    if mu.a >= 0 && mu.b <= -2 {
        Some((mu.a, -mu.b - 2, false))
    } else if mu.a <= -2 && mu.b >= 0 {
        Some((mu.b, -mu.a - 2, true))
    } else {
        None
    }
}

pub fn region(mu: Weight) -> Region {
    if mu.a == -1 || mu.b == -1 {
        Region::Singular
    } else if mu.is_dominant() {
        Region::Dominant
    } else if mu.is_antidominant() {
        Region::AntiDominant
    } else {
        let (m, n, _) = chamber_pair(mu).expect("remaining weights are in chamber form");
        match m.cmp(&n) {
            std::cmp::Ordering::Greater => Region::H1Chamber,
            std::cmp::Ordering::Less => Region::H2Chamber,
            std::cmp::Ordering::Equal => Region::GammaWall,
        }
    }
}

/// Ĝr window of (m, n): d = degree(m), a = leading digit of m, and n in the
/// same window [a·p^d, (a+1)·p^d − 1]. Requires d ≥ 1.
pub fn hat_window(m: i64, n: i64, p: Prime) -> Result<Option<Window>> {
    if m < 1 || n < 1 {
        return Ok(None);
    }
    let (d, a, r) = leading_split(m, p)?;
    if d == 0 {
        return Ok(None);
    }
    let base = a * p.pow(d)?;
    let s = n - base;
    if s < 0 || s > p.pow(d)? - 1 {
        return Ok(None);
    }
    Ok(Some(Window { d, a, r, s }))
}

fn bar_window(m: i64, n: i64, p: Prime) -> Result<Option<Window>> {
    for x in [m + 1, n + 1, m, n] {
        if x < 1 {
            continue;
        }
        let (d, a, _) = leading_split(x, p)?;
        if d == 0 {
            continue;
        }
        let base = a * p.pow(d)?;
        let top = (a + 1) * p.pow(d)? - 1;
        if (base - 1..=top).contains(&m) && (base - 1..=top).contains(&n) {
            return Ok(Some(Window { d, a, r: m - base, s: n - base }));
        }
    }
    Ok(None)
}

/// Griffith membership of the normalized pair (m, n), finest class first.
pub fn griffith(m: i64, n: i64, p: Prime) -> Result<(Griffith, Option<Window>)> {
    if let Some(w) = hat_window(m, n, p)? {
        let edge = p.pow(w.d)? - 1;
        let class = if w.r < edge && w.s < edge { Griffith::Gr } else { Griffith::GrHatOnly };
        return Ok((class, Some(w)));
    }
    if let Some(w) = bar_window(m, n, p)? {
        return Ok((Griffith::GrBarOnly, Some(w)));
    }
    Ok((Griffith::None, None))
}

pub fn in_gr(mu: Weight, p: Prime) -> Result<bool> {
    match chamber_pair(mu) {
        Some((m, n, _)) => Ok(griffith(m, n, p)?.0 == Griffith::Gr),
        None => Ok(false),
    }
}

pub fn classify(mu: Weight, p: Prime) -> WeightProfile {
    let (mu0, mu1) = restricted_split(mu, p);
    let (griffith_class, window) = match chamber_pair(mu) {
        // Overflow here would need weights near i64::MAX; treat as outside.
        Some((m, n, _)) => griffith(m, n, p).unwrap_or((Griffith::None, None)),
        None => (Griffith::None, None),
    };
    WeightProfile {
        weight: mu,
        region: region(mu),
        restricted_type: restricted_type(mu0, p),
        degree: if mu == Weight::new(-1, -1) { None } else { weight_degree(mu, p) },
        griffith: griffith_class,
        window,
        mu0,
        mu1,
    }
}
