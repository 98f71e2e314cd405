//! Cohomology of the B-modules E_δ(ν), boundary images I_δ(μ), and the
//! filtrations of H^j(μ) induced by D-filtrations of Ẑ(μ).
//!
//! H^i(E_δ(ν)) is read off the long exact sequence of
//! 0 → ν−δ → E_δ(ν) → ν → 0 whenever its connecting maps are forced to vanish,
//! and otherwise H² comes from the three-layer leading-digit recursion.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::charring::Character;
use crate::cohom::Engine;
use crate::dfilt::{d_filtration, DLayer, Delta, EDescriptor};
use crate::error::{domain, Error, Result};
use crate::lattice::{
    digits, leading_split, restricted_split, restricted_type, valuation, Prime, RestrictedType, Weight,
};

/// Characters of H⁰ … H³.
pub type Degrees = [Character; 4];

fn zeros() -> Degrees {
    Default::default()
}

fn add4(x: &Degrees, y: &Degrees) -> Result<Degrees> {
    Ok([x[0].plus(&y[0])?, x[1].plus(&y[1])?, x[2].plus(&y[2])?, x[3].plus(&y[3])?])
}

fn euler(x: &Degrees) -> Result<Character> {
    x[0].minus(&x[1])?.plus(&x[2])?.minus(&x[3])
}

fn outside(e: EDescriptor, why: &str) -> Error {
    Error::OutsideSupportedFamily(format!("{e:?}: {why}"))
}

/// x ≥ 1 with exactly one nonzero base-p digit.
fn single_digit(x: i64, p: Prime) -> bool {
    x >= 1 && digits(x, p).iter().filter(|&&d| d != 0).count() == 1
}

/// The leading-digit patterns on which H²(E_δ(ν)) vanishes, in either
/// orientation: E_β(x, −c·p^d) with x ≥ c·p^d − 1, and E_α(c·p^d, y) with
/// y ≥ −c·p^d − 1, for 1 ≤ c ≤ p.
pub fn h2_vanishing_pattern(e: EDescriptor, p: Prime) -> bool {
    fn direct(e: EDescriptor, p: Prime) -> bool {
        let Weight { a: x, b: y } = e.nu;
        match e.delta {
            Delta::Alpha => single_digit(x, p) && y >= -x - 1,
            Delta::Beta => single_digit(-y, p) && x >= -y - 1,
            Delta::Zero => false,
        }
    }
    direct(e, p) || direct(e.transpose(), p)
}

/// Parameters of ν = (a·p^d + r, −a·p^d − s − 2) for the three-layer recursion.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ThreeLayer {
    pub d: u32,
    pub a: i64,
    pub r: i64,
    pub s: i64,
}

/// Some(..) when E lies in the range of the three-layer recursion:
/// 1 ≤ r ≤ p^d, 0 ≤ s ≤ p^d−1 for α; −1 ≤ r ≤ p^d−2, −2 ≤ s ≤ p^d−3 for β.
pub fn three_layer_params(e: EDescriptor, p: Prime) -> Result<Option<ThreeLayer>> {
    let Weight { a: x, b: y } = e.nu;
    let split = match e.delta {
        Delta::Zero => return Ok(None),
        Delta::Alpha if -y - 2 >= 1 => {
            let (d, a, s) = leading_split(-y - 2, p)?;
            let q = p.pow(d)?;
            ThreeLayer { d, a, r: x - a * q, s }
        }
        Delta::Beta if -y >= 1 => {
            let (d, a, _) = leading_split(-y, p)?;
            let q = p.pow(d)?;
            ThreeLayer { d, a, r: x - a * q, s: -y - 2 - a * q }
        }
        _ => return Ok(None),
    };
    let q = p.pow(split.d)?;
    let fits = match e.delta {
        Delta::Alpha => (1..=q).contains(&split.r) && (0..q).contains(&split.s),
        _ => (-1..=q - 2).contains(&split.r) && (-2..=q - 3).contains(&split.s),
    };
    Ok(fits.then_some(split))
}

enum Sequence {
    /// The long exact sequence splits into short ones; H^i(E) is the sum.
    Split(Degrees),
    /// Cohomology of the socle ν−δ and head ν.
    Linked(Arc<Degrees>, Arc<Degrees>),
}

/// How a boundary image was obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageRule {
    /// p does not divide ⟨μ, δ∨⟩, so μ − δ is not linked to μ.
    Unlinked,
    /// The valuation conditions under which the boundary map is zero.
    ZeroBoundary,
    /// H²(E_δ(μ)) = 0, so the image is all of H²(μ − δ).
    WholeTarget,
    /// ch H²(μ) + ch H²(μ − δ) − ch H²(E_δ(μ)).
    Difference,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryImage {
    pub delta: Delta,
    pub mu: Weight,
    pub rule: ImageRule,
    pub character: Character,
}

/// Which part of a D-layer a filtration layer stands for.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Whole,
    Socle,
    Head,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Plain,
    Effaced,
    Partial,
}

/// One layer L(ν⁰) ⊗ H^j(…)^(1) of a filtration of H^j(μ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HLayer {
    /// Position in the ν_k numbering: a δ = 0 layer takes one index, an E_δ
    /// layer two (socle, then head).
    pub index: usize,
    pub nu: Weight,
    pub nu0: Weight,
    pub e: EDescriptor,
    pub part: Part,
    pub j: u8,
    /// What the layer contributes to ch H^j(μ).
    pub resolved: Character,
    pub status: Status,
    /// For effaced and partial layers, the part removed by a connecting map.
    pub image: Option<Character>,
}

impl HLayer {
    /// The B-weight ν¹ of the part.
    pub fn nu1(&self) -> Weight {
        match self.part {
            Part::Socle => self.e.socle(),
            _ => self.e.nu,
        }
    }
}

impl Serialize for HLayer {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HLayer", 10)?;
        st.serialize_field("k", &self.index)?;
        st.serialize_field("nu", &self.nu)?;
        st.serialize_field("nu0", &self.nu0)?;
        st.serialize_field("delta", &self.e.delta)?;
        st.serialize_field("nu1", &self.nu1())?;
        st.serialize_field("part", &self.part)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("character", &self.resolved)?;
        st.serialize_field("image", &self.image)?;
        st.end()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subcase {
    #[serde(rename = "R")]
    pub r: i64,
    #[serde(rename = "S")]
    pub s: i64,
}

/// Layer-by-layer account of H^i(m, −n−2) with effacements made explicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerReport {
    pub mu: Weight,
    pub i: u8,
    #[serde(serialize_with = "tag_of")]
    pub case: RestrictedType,
    pub subcase: Subcase,
    pub layers: Vec<HLayer>,
    pub total: Character,
}

fn tag_of<S: Serializer>(t: &RestrictedType, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(t.tag())
}

impl LayerReport {
    pub fn indices_with(&self, status: Status) -> Vec<usize> {
        self.layers.iter().filter(|l| l.status == status).map(|l| l.index).collect()
    }
}

/// L(0, n − r_i) ⊗ W(r_{i−1}, r_i − 2r_{i−1} − 2) for a base-p prefix r_i of n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallLayer {
    pub i: u32,
    pub outer: Weight,
    pub weyl: Weight,
    pub character: Character,
}

/// L(ν)^(d) ⊗ V(λ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TiltPiece {
    pub nu: Weight,
    pub d: u32,
    pub lambda: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TiltLevel {
    pub i: u32,
    pub pieces: Vec<TiltPiece>,
    pub character: Character,
}

/// Both filtrations of H²(n, −n−2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallFiltration {
    pub n: i64,
    pub digit_layers: Vec<WallLayer>,
    pub levels: Vec<TiltLevel>,
}

impl WallFiltration {
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }
}

/// Memoized E_δ cohomology on top of a cohomology [`Engine`].
pub struct Filtrations {
    engine: Engine,
    full: RwLock<HashMap<EDescriptor, Arc<Degrees>>>,
    second: RwLock<HashMap<EDescriptor, Character>>,
    weights: RwLock<HashMap<Weight, Arc<Degrees>>>,
}

impl Filtrations {
    pub fn new(p: Prime) -> Filtrations {
        Filtrations::with_engine(Engine::new(p))
    }

    pub fn with_engine(engine: Engine) -> Filtrations {
        Filtrations {
            engine,
            full: RwLock::new(HashMap::new()),
            second: RwLock::new(HashMap::new()),
            weights: RwLock::new(HashMap::new()),
        }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn prime(&self) -> Prime {
        self.engine.prime()
    }

    fn coh(&self, mu: Weight) -> Result<Arc<Degrees>> {
        if let Some(hit) = self.weights.read().unwrap().get(&mu) {
            return Ok(hit.clone());
        }
        let v = Arc::new(self.engine.coh_all(mu)?);
        Ok(self.weights.write().unwrap().entry(mu).or_insert(v).clone())
    }

    fn sequence(&self, e: EDescriptor) -> Result<Sequence> {
        let q = self.prime().get();
        let pairing = match e.delta {
            Delta::Zero => return Ok(Sequence::Split((*self.coh(e.nu)?).clone())),
            Delta::Alpha => e.nu.a,
            Delta::Beta => e.nu.b,
        };
        if pairing == 0 {
            return Ok(Sequence::Split(zeros()));
        }
        let low = self.coh(e.socle())?;
        let top = self.coh(e.nu)?;
        let quiet = (0..3).all(|i| top[i].is_zero() || low[i + 1].is_zero());
        if pairing % q != 0 || quiet {
            return Ok(Sequence::Split(add4(&low, &top)?));
        }
        Ok(Sequence::Linked(low, top))
    }

    /// [H⁰, …, H³] of E_δ(ν).
    pub fn e_coh_all(&self, e: EDescriptor) -> Result<Arc<Degrees>> {
        if let Some(hit) = self.full.read().unwrap().get(&e) {
            return Ok(hit.clone());
        }
        let v = Arc::new(match self.sequence(e)? {
            Sequence::Split(v) => v,
            Sequence::Linked(low, top) => {
                if !(top[0].is_zero() || low[1].is_zero()) {
                    return Err(outside(e, "H⁰ connecting map is not forced to vanish"));
                }
                if !(top[2].is_zero() || low[3].is_zero()) {
                    return Err(outside(e, "H² connecting map is not forced to vanish"));
                }
                let h0 = low[0].plus(&top[0])?;
                let h3 = low[3].plus(&top[3])?;
                let h2 = self.e_h2(e)?;
                let h1 = h0.plus(&h2)?.minus(&h3)?.minus(&euler(&low)?)?.minus(&euler(&top)?)?;
                [h0, h1, h2, h3]
            }
        });
        Ok(self.full.write().unwrap().entry(e).or_insert(v).clone())
    }

    /// ch H^i(E_δ(ν)).
    pub fn e_coh_char(&self, i: u8, e: EDescriptor) -> Result<Character> {
        if i > 3 {
            return Err(domain(format!("cohomological degree {i} is outside 0..=3")));
        }
        match i {
            0 => self.e_h0(e),
            2 => self.e_h2(e),
            3 => self.e_h3(e),
            _ => Ok(self.e_coh_all(e)?[1].clone()),
        }
    }

    fn e_h0(&self, e: EDescriptor) -> Result<Character> {
        match self.sequence(e)? {
            Sequence::Split(v) => Ok(v[0].clone()),
            Sequence::Linked(low, top) if top[0].is_zero() || low[1].is_zero() => low[0].plus(&top[0]),
            Sequence::Linked(..) => Err(outside(e, "H⁰ connecting map is not forced to vanish")),
        }
    }

    fn e_h3(&self, e: EDescriptor) -> Result<Character> {
        match self.sequence(e)? {
            Sequence::Split(v) => Ok(v[3].clone()),
            Sequence::Linked(low, top) if top[2].is_zero() || low[3].is_zero() => low[3].plus(&top[3]),
            Sequence::Linked(..) => Err(outside(e, "H² connecting map is not forced to vanish")),
        }
    }

    fn e_h2(&self, e: EDescriptor) -> Result<Character> {
        if let Some(hit) = self.second.read().unwrap().get(&e) {
            return Ok(hit.clone());
        }
        let v = self.compute_e_h2(e)?;
        Ok(self.second.write().unwrap().entry(e).or_insert(v).clone())
    }

    fn compute_e_h2(&self, e: EDescriptor) -> Result<Character> {
        let (low, top) = match self.sequence(e)? {
            Sequence::Split(v) => return Ok(v[2].clone()),
            Sequence::Linked(low, top) => (low, top),
        };
        if low[2].is_zero() && top[2].is_zero() {
            return Ok(Character::zero());
        }
        if h2_vanishing_pattern(e, self.prime()) {
            return Ok(Character::zero());
        }
        if let Some(c) = self.h2_by_recursion(e)? {
            return Ok(c);
        }
        if let Some(c) = self.h2_by_recursion(e.transpose())? {
            return Ok(c.transpose());
        }
        Err(outside(e, "no vanishing pattern or three-layer recursion applies"))
    }

    /// ch H²(E) by the three-layer recursion, when E is in its range.
    pub fn h2_by_recursion(&self, e: EDescriptor) -> Result<Option<Character>> {
        let p = self.prime();
        let Some(ThreeLayer { d, a, r, s }) = three_layer_params(e, p)? else {
            return Ok(None);
        };
        let q = p.pow(d)?;
        let at = |x: i64, y: i64| EDescriptor::new(e.delta, Weight::new(x, y));
        let mut out = self.engine.twisted_row(a - 1, d)?.times(&self.e_h3(at(r - q, -s - 2))?)?;
        out = out.plus(&self.engine.twisted_row(a, d)?.times(&self.e_h2(at(r, -s - 2))?)?)?;
        if a >= 2 {
            out = out.plus(&self.engine.twisted_row(a - 2, d)?.times(&self.e_h2(at(r - q, q - s - 2))?)?)?;
        }
        Ok(Some(out))
    }

    /// Image of H¹(ν) → H²(ν − δ) for any ν, from the long exact sequence.
    pub fn boundary_image(&self, delta: Delta, nu: Weight) -> Result<Character> {
        if delta == Delta::Zero {
            return Err(domain("boundary images need delta alpha or beta"));
        }
        let e = EDescriptor::new(delta, nu);
        let low = self.coh(e.socle())?;
        let top = self.coh(nu)?;
        if top[2].is_zero() || low[3].is_zero() {
            return top[2].plus(&low[2])?.minus(&self.e_h2(e)?);
        }
        let images = self.images(e)?;
        Ok(images[1].clone())
    }

    /// Images of the connecting maps H^i(ν) → H^{i+1}(ν − δ), i = 0, 1, 2.
    fn images(&self, e: EDescriptor) -> Result<[Character; 3]> {
        let low = self.coh(e.socle())?;
        let top = self.coh(e.nu)?;
        let mid = self.e_coh_all(e)?;
        let im0 = low[0].plus(&top[0])?.minus(&mid[0])?;
        let im1 = low[1].minus(&im0)?.plus(&top[1])?.minus(&mid[1])?;
        let im2 = low[2].minus(&im1)?.plus(&top[2])?.minus(&mid[2])?;
        Ok([im0, im1, im2])
    }

    /// ch I_δ(μ) for μ = (m, −n−2) with m > n ≥ 0.
    pub fn i_delta_char(&self, delta: Delta, mu: Weight) -> Result<BoundaryImage> {
        let p = self.prime();
        let (m, n) = (mu.a, -mu.b - 2);
        if delta == Delta::Zero {
            return Err(domain("boundary images need delta alpha or beta"));
        }
        if !(m > n && n >= 0) {
            return Err(domain(format!("boundary images need mu = (m, -n-2) with m > n >= 0, got {mu}")));
        }
        let done = |rule, character| Ok(BoundaryImage { delta, mu, rule, character });
        let (pairing, linked) = match delta {
            Delta::Alpha => (m, m),
            _ => (mu.b, n + 2),
        };
        if pairing % p.get() != 0 {
            return done(ImageRule::Unlinked, Character::zero());
        }
        let k = valuation(linked, p);
        if k >= 1 && m - n >= p.pow(k)? {
            return done(ImageRule::ZeroBoundary, Character::zero());
        }
        if h2_vanishing_pattern(EDescriptor::new(delta, mu), p) {
            return done(ImageRule::WholeTarget, self.engine.coh_char(2, mu - delta.weight())?);
        }
        done(ImageRule::Difference, self.boundary_image(delta, mu)?)
    }

    fn resolve(&self, nu0: Weight, c: &Character) -> Result<Character> {
        self.engine.simple(nu0)?.times(&c.twist(1, self.prime())?)
    }

    fn layer(&self, index: usize, l: &DLayer, part: Part, j: u8, full: &Character, kept: &Character) -> Result<HLayer> {
        let status = if kept == full {
            Status::Plain
        } else if kept.is_zero() {
            Status::Effaced
        } else {
            Status::Partial
        };
        let image = match status {
            Status::Plain => None,
            _ => Some(self.resolve(l.nu0, &full.minus(kept)?)?),
        };
        let nu1 = if part == Part::Socle { l.e.socle() } else { l.e.nu };
        Ok(HLayer {
            index,
            nu: l.nu0 + self.prime().get() * nu1,
            nu0: l.nu0,
            e: l.e,
            part,
            j,
            resolved: self.resolve(l.nu0, kept)?,
            status,
            image,
        })
    }

    /// The D-filtration of Ẑ(μ) pushed to H^j: one layer per D-layer.
    ///
    /// For j ∈ {1, 2}, when some layer of μ falls outside the supported
    /// families, the filtration of H^{3−j}(w₀·μ) is returned instead; its
    /// layers carry j = 3 − j and the weights of w₀·μ.
    pub fn p_hi_d_filtration(&self, j: u8, mu: Weight) -> Result<Vec<HLayer>> {
        if j > 3 {
            return Err(domain(format!("cohomological degree {j} is outside 0..=3")));
        }
        match self.layers_of(j, mu) {
            Err(Error::OutsideSupportedFamily(_)) if j == 1 || j == 2 => self.layers_of(3 - j, mu.w0_dot()),
            other => other,
        }
    }

    fn layers_of(&self, j: u8, mu: Weight) -> Result<Vec<HLayer>> {
        let mut out = Vec::new();
        let mut index = 1;
        for l in d_filtration(mu, self.prime()) {
            let kept = self.e_coh_char(j, l.e)?;
            let full = if l.e.delta == Delta::Zero {
                kept.clone()
            } else {
                self.coh(l.e.socle())?[j as usize].plus(&self.coh(l.e.nu)?[j as usize])?
            };
            out.push(self.layer(index, &l, Part::Whole, j, &full, &kept)?);
            index += l.e.dim();
        }
        Ok(out)
    }

    /// Per-weight account of H^i(m, −n−2), m ≥ n ≥ 0, m ≥ p: E-layers split
    /// into socle and head, with effaced and partial factors marked.
    pub fn hi_layer_report(&self, i: u8, mu: Weight) -> Result<LayerReport> {
        let p = self.prime();
        let (m, n) = (mu.a, -mu.b - 2);
        if !(i == 1 || i == 2) {
            return Err(domain(format!("layer reports cover degrees 1 and 2, got {i}")));
        }
        if !(m >= n && n >= 0 && m >= p.get()) {
            return Err(domain(format!("layer reports need mu = (m, -n-2) with m >= n >= 0 and m >= p, got {mu}")));
        }
        let (d, a, _) = leading_split(m, p)?;
        let block = a * p.pow(d - 1)?;
        let subcase = Subcase { r: m / p.get() - block, s: n / p.get() - block };
        let (mu0, _) = restricted_split(mu, p);
        let mut layers = Vec::new();
        let mut total = Character::zero();
        let mut index = 1;
        let at = i as usize;
        for l in d_filtration(mu, p) {
            let parts = if l.e.delta == Delta::Zero {
                let h = &self.coh(l.e.nu)?[at];
                vec![self.layer(index, &l, Part::Whole, i, h, h)?]
            } else {
                let low = self.coh(l.e.socle())?;
                let top = self.coh(l.e.nu)?;
                let im = self.images(l.e)?;
                let before = if at == 0 { Character::zero() } else { im[at - 1].clone() };
                let after = if at == 3 { Character::zero() } else { im[at].clone() };
                vec![
                    self.layer(index, &l, Part::Socle, i, &low[at], &low[at].minus(&before)?)?,
                    self.layer(index + 1, &l, Part::Head, i, &top[at], &top[at].minus(&after)?)?,
                ]
            };
            for h in parts {
                total = total.plus(&h.resolved)?;
                if !h.resolved.is_zero() || h.status != Status::Plain {
                    layers.push(h);
                }
            }
            index += l.e.dim();
        }
        Ok(LayerReport { mu, i, case: restricted_type(mu0, p), subcase, layers, total })
    }

    /// The p-filtration of H⁰(λ), λ dominant, with E-layers split into their
    /// two weights and the wall effacements applied.
    pub fn jantzen_p_filtration(&self, lambda: Weight) -> Result<Vec<HLayer>> {
        let p = self.prime();
        if !lambda.is_dominant() {
            return Err(domain(format!("the p-filtration needs a dominant weight, got {lambda}")));
        }
        let (lambda0, lambda1) = restricted_split(lambda, p);
        let nabla = restricted_type(lambda0, p) == RestrictedType::Nabla;
        let table = self.engine.table();
        let mut out = Vec::new();
        let mut index = 1;
        for l in d_filtration(lambda, p) {
            let parts: &[Part] = if l.e.delta == Delta::Zero { &[Part::Whole] } else { &[Part::Socle, Part::Head] };
            for (offset, &part) in parts.iter().enumerate() {
                let nu1 = if part == Part::Socle { l.e.socle() } else { l.e.nu };
                let full = if nu1.is_dominant() { (*table.weyl(nu1)).clone() } else { Character::zero() };
                let wall = match l.e.delta {
                    Delta::Alpha => lambda1.a == 0,
                    Delta::Beta => lambda1.b == 0,
                    Delta::Zero => false,
                };
                let kept = if part == Part::Head && nabla && wall { Character::zero() } else { full.clone() };
                out.push(self.layer(index + offset, &l, part, 0, &full, &kept)?);
            }
            index += l.e.dim();
        }
        Ok(out)
    }

    /// Digit-prefix and recursive filtrations of H²(n, −n−2), n ≥ 1.
    pub fn wall_h2_filtration(&self, n: i64) -> Result<WallFiltration> {
        let p = self.prime();
        if n < 1 {
            return Err(domain(format!("wall filtrations need n >= 1, got {n}")));
        }
        let digs = digits(n, p);
        let mut digit_layers = Vec::new();
        let mut prefix = vec![0i64; digs.len()];
        let mut acc = 0;
        for (k, &dk) in digs.iter().enumerate() {
            acc += dk * p.pow(k as u32)?;
            prefix[k] = acc;
        }
        for i in 1..digs.len() {
            let (lo, hi) = (prefix[i - 1], prefix[i]);
            let w = self
                .engine
                .core_h2(hi, hi)?
                .minus(&self.engine.twisted_row(digs[i], i as u32)?.times(&self.engine.core_h2(lo, lo)?)?)?;
            let outer = Weight::new(0, n - hi);
            let character = self.engine.simple(outer)?.times(&w)?;
            digit_layers.push(WallLayer { i: i as u32, outer, weyl: Weight::new(lo, hi - 2 * lo - 2), character });
        }
        let levels = self
            .tilt_levels(n)?
            .into_iter()
            .enumerate()
            .map(|(k, pieces)| {
                let mut character = Character::zero();
                for piece in &pieces {
                    let c = self.engine.simple(piece.nu)?.twist(piece.d, p)?;
                    character = character.plus(&c.times(&self.engine.table().weyl(piece.lambda))?)?;
                }
                Ok(TiltLevel { i: k as u32 + 1, pieces, character })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WallFiltration { n, digit_layers, levels })
    }

    /// Levels 1..ℓ of the recursive filtration, bottom first.
    fn tilt_levels(&self, n: i64) -> Result<Vec<Vec<TiltPiece>>> {
        let p = self.prime();
        if n < p.get() {
            return Ok(Vec::new());
        }
        let (d, a, r) = leading_split(n, p)?;
        let q = p.pow(d)?;
        let lower = self.tilt_levels(r)?;
        let upper = if a >= 2 { self.tilt_levels(q - r - 2)? } else { Vec::new() };
        let depth = lower.len().max(upper.len());
        let mut out = vec![Vec::new(); depth];
        for (k, level) in lower.into_iter().enumerate() {
            for t in level {
                let lift = p.pow(d - t.d)?;
                out[k].push(TiltPiece { nu: t.nu + lift * Weight::new(0, a), d: t.d, lambda: t.lambda });
            }
        }
        for (k, level) in upper.into_iter().enumerate() {
            for t in level {
                let lift = p.pow(d - t.d)?;
                out[k].push(TiltPiece {
                    nu: t.nu.transpose() + lift * Weight::new(0, a - 2),
                    d: t.d,
                    lambda: t.lambda.transpose(),
                });
            }
        }
        out.push(vec![TiltPiece { nu: Weight::new(0, a - 1), d, lambda: Weight::new(r, q - r - 2) }]);
        Ok(out)
    }
}

pub fn e_coh_char(i: u8, e: EDescriptor, p: Prime) -> Result<Character> {
    Filtrations::new(p).e_coh_char(i, e)
}

pub fn i_delta_char(delta: Delta, mu: Weight, p: Prime) -> Result<BoundaryImage> {
    Filtrations::new(p).i_delta_char(delta, mu)
}

pub fn p_hi_d_filtration(j: u8, mu: Weight, p: Prime) -> Result<Vec<HLayer>> {
    Filtrations::new(p).p_hi_d_filtration(j, mu)
}

pub fn jantzen_p_filtration(lambda: Weight, p: Prime) -> Result<Vec<HLayer>> {
    Filtrations::new(p).jantzen_p_filtration(lambda)
}

pub fn wall_h2_filtration(n: i64, p: Prime) -> Result<WallFiltration> {
    Filtrations::new(p).wall_h2_filtration(n)
}

pub fn hi_layer_report(i: u8, mu: Weight, p: Prime) -> Result<LayerReport> {
    Filtrations::new(p).hi_layer_report(i, mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: i64, b: i64) -> Weight {
        Weight::new(a, b)
    }

    fn prime(q: i64) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn named_boundary_images() {
        let f = Filtrations::new(prime(3));
        let zero = f.i_delta_char(Delta::Alpha, w(15, -12)).unwrap();
        assert_eq!(zero.rule, ImageRule::ZeroBoundary);
        assert!(zero.character.is_zero());
        let whole = f.i_delta_char(Delta::Alpha, w(6, -6)).unwrap();
        assert_eq!(whole.rule, ImageRule::WholeTarget);
        assert_eq!(whole.character, Character::monomial(w(0, 0)));
        let unlinked = f.i_delta_char(Delta::Alpha, w(7, -6)).unwrap();
        assert_eq!(unlinked.rule, ImageRule::Unlinked);
        assert!(unlinked.character.is_zero());
    }

    #[test]
    fn boundary_image_domain() {
        let f = Filtrations::new(prime(3));
        for mu in [w(3, -5), w(2, -1), w(-3, -2)] {
            assert!(matches!(f.i_delta_char(Delta::Alpha, mu), Err(Error::DomainError(_))), "{mu:?}");
        }
        assert!(matches!(f.i_delta_char(Delta::Zero, w(6, -6)), Err(Error::DomainError(_))));
    }

    #[test]
    fn wall_modules_have_no_cohomology() {
        for q in [2, 3, 5] {
            let f = Filtrations::new(prime(q));
            for y in -12..12 {
                for e in [EDescriptor::new(Delta::Alpha, w(0, y)), EDescriptor::new(Delta::Beta, w(y, 0))] {
                    assert!(f.e_coh_all(e).unwrap().iter().all(Character::is_zero), "{e:?}");
                }
            }
        }
    }

    #[test]
    fn leading_digit_extension_has_no_h2() {
        for q in [2, 3, 5] {
            let p = prime(q);
            let f = Filtrations::new(p);
            for d in 1..=2 {
                let top = p.pow(d).unwrap();
                for a in 1..q {
                    for r in -1..top {
                        let e = EDescriptor::new(Delta::Beta, w(a * top + r, -a * top));
                        assert!(f.e_coh_char(2, e).unwrap().is_zero(), "{e:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn unlinked_extension_splits() {
        let f = Filtrations::new(prime(5));
        let e = EDescriptor::new(Delta::Alpha, w(1, -3));
        for i in 0..4 {
            let sum =
                f.engine().coh_char(i, w(1, -3)).unwrap().plus(&f.engine().coh_char(i, w(-1, -2)).unwrap()).unwrap();
            assert_eq!(f.e_coh_char(i, e).unwrap(), sum);
        }
        assert_eq!(f.e_coh_char(1, e).unwrap(), f.engine().coh_char(1, w(1, -3)).unwrap());
    }

    #[test]
    fn wall_base_case() {
        let f = Filtrations::new(prime(3));
        let wall = f.wall_h2_filtration(4).unwrap();
        assert_eq!(wall.depth(), 1);
        assert_eq!(wall.levels[0].pieces, vec![TiltPiece { nu: w(0, 0), d: 1, lambda: w(1, 0) }]);
        assert_eq!(wall.levels[0].character, f.engine().core_h2(4, 4).unwrap());
        assert_eq!(wall.digit_layers.len(), 1);
        assert_eq!(wall.digit_layers[0].character, f.engine().core_h2(4, 4).unwrap());
    }

    #[test]
    fn small_walls_are_empty() {
        for q in [2, 3, 5] {
            let f = Filtrations::new(prime(q));
            for n in 1..q {
                let wall = f.wall_h2_filtration(n).unwrap();
                assert!(wall.digit_layers.is_empty() && wall.levels.is_empty());
            }
            assert!(matches!(f.wall_h2_filtration(0), Err(Error::DomainError(_))));
        }
    }

    #[test]
    fn jantzen_needs_dominant() {
        let f = Filtrations::new(prime(3));
        assert!(matches!(f.jantzen_p_filtration(w(-1, 2)), Err(Error::DomainError(_))));
    }

    #[test]
    fn report_serialization_shape() {
        let f = Filtrations::new(prime(5));
        let report = f.hi_layer_report(1, w(8, -2)).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["case"], "Delta");
        assert_eq!(v["subcase"], serde_json::json!({"R": 0, "S": -1}));
        let effaced: Vec<_> = v["layers"].as_array().unwrap().iter().filter(|l| l["status"] == "effaced").collect();
        assert_eq!(effaced.len(), 1);
        assert_eq!(effaced[0]["k"], 5);
        assert!(!effaced[0]["image"].is_null());
        assert!(v["layers"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|l| l["status"] == "plain")
            .all(|l| l["image"].is_null()));
    }
}
