//! Property suites over boxes of weights. Each suite stops at the first
//! violated identity and reports it.

use std::collections::HashMap;
use std::fmt;

use crate::charring::{zhat_char, Character};
use crate::dfilt::{d_filtration, d_layer_char, Delta};
use crate::error::Result;
use crate::hifilt::{Filtrations, Status};
use crate::lattice::{in_gr, restricted_split, restricted_type, Prime, RestrictedType, Weight};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Euler,
    Duality,
    Griffith,
    Degree1,
    Named,
    Dfilt,
    Grand,
    Jantzen,
    Idelta,
    Wall,
    Genuine,
    All,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Euler,
        Suite::Duality,
        Suite::Griffith,
        Suite::Degree1,
        Suite::Named,
        Suite::Dfilt,
        Suite::Grand,
        Suite::Jantzen,
        Suite::Idelta,
        Suite::Wall,
        Suite::Genuine,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Euler => "euler",
            Suite::Duality => "duality",
            Suite::Griffith => "griffith",
            Suite::Degree1 => "degree1",
            Suite::Named => "named",
            Suite::Dfilt => "dfilt",
            Suite::Grand => "grand",
            Suite::Jantzen => "jantzen",
            Suite::Idelta => "idelta",
            Suite::Wall => "wall",
            Suite::Genuine => "genuine",
            Suite::All => "all",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// What the suite checks, one line.
    pub fn describe(self) -> &'static str {
        match self {
            Suite::Euler => "alternating sum of H^i(x,y) equals chi(x,y) for |x|,|y| <= box",
            Suite::Duality => "H^i(mu) = H^(3-i)(w0.mu) and H^i(mu) = dual H^(3-i)(-2rho-mu) for |x|,|y| <= box",
            Suite::Griffith => "H^1 and H^2 of (m,-n-2) both nonzero iff the weight is in Gr, 0 <= m,n <= box",
            Suite::Degree1 => "H^2(ap+r, -ap-s-2) = L(s, ap-r-2) on Delta and gamma-singular types",
            Suite::Named => "tabulated values at p = 3",
            Suite::Dfilt => "D-filtration layers sum to Zhat(mu) with p^3 dimensions and the right layer count, |x|,|y| <= box",
            Suite::Grand => "p-H^j-D-filtration layers sum to H^j(m,-n-2), j = 1, 2, 0 <= n <= m <= box",
            Suite::Jantzen => "p-filtration of H^0(lambda) sums to chi(lambda) with the expected effacements, lambda <= box",
            Suite::Idelta => "boundary images are multiplicity free, inside H^2(mu-delta), and agree with it on simples, 0 <= n < m <= box",
            Suite::Wall => "both filtrations of H^2(n,-n-2) sum to it and the level bound holds, 1 <= n <= box",
            Suite::Genuine => "computed characters are genuine and decompose into simples",
            Suite::All => "every suite at its default box",
        }
    }

    /// The box each suite uses when none is given.
    pub fn default_box(self, p: Prime) -> i64 {
        let q = p.get();
        match self {
            Suite::Euler | Suite::Duality => 60,
            Suite::Griffith => 100,
            Suite::Degree1 | Suite::Named => 0,
            Suite::Dfilt => 3 * q,
            Suite::Grand => q * q + q,
            Suite::Jantzen => q * q,
            Suite::Idelta => 80,
            Suite::Wall => q * q * q,
            Suite::Genuine => q * q + q,
            Suite::All => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The first identity found to fail, with where it failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub suite: Suite,
    pub p: i64,
    pub mu: Option<Weight>,
    pub identity: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed at p={}", self.suite, self.p)?;
        if let Some(mu) = self.mu {
            write!(f, " mu={mu}")?;
        }
        write!(f, ": {}", self.identity)
    }
}

impl std::error::Error for Violation {}

/// Number of identities checked by a passing suite.
pub type Checked = usize;

pub struct Scan<'a> {
    f: &'a Filtrations,
    suite: Suite,
    checked: Checked,
}

impl<'a> Scan<'a> {
    pub fn new(f: &'a Filtrations, suite: Suite) -> Scan<'a> {
        Scan { f, suite, checked: 0 }
    }

    pub fn checked(&self) -> Checked {
        self.checked
    }

    fn fail(&self, mu: Option<Weight>, identity: String) -> Violation {
        Violation { suite: self.suite, p: self.f.prime().get(), mu, identity }
    }

    fn check(&mut self, ok: bool, mu: Weight, identity: impl FnOnce() -> String) -> std::result::Result<(), Violation> {
        self.checked += 1;
        if ok {
            Ok(())
        } else {
            Err(self.fail(Some(mu), identity()))
        }
    }

    fn get<T>(&self, r: Result<T>, mu: Weight) -> std::result::Result<T, Violation> {
        r.map_err(|e| self.fail(Some(mu), format!("{}: {e}", e.name())))
    }

    fn genuine(&mut self, c: &Character, mu: Weight, what: &str) -> std::result::Result<(), Violation> {
        self.check(c.is_genuine(), mu, || format!("{what} has a negative multiplicity"))
    }
}

type Outcome = std::result::Result<Checked, Violation>;

fn square(size: i64) -> impl Iterator<Item = Weight> {
    (-size..=size).flat_map(move |a| (-size..=size).map(move |b| Weight::new(a, b)))
}

/// (m, n) with 0 ≤ n ≤ m ≤ size (strict when `strict`).
fn normalized(size: i64, strict: bool) -> impl Iterator<Item = (i64, i64)> {
    (0..=size).flat_map(move |m| (0..=m).filter(move |&n| !strict || n < m).map(move |n| (m, n)))
}

fn chamber(m: i64, n: i64) -> Weight {
    Weight::new(m, -n - 2)
}

pub fn euler(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Euler);
    for mu in square(size) {
        let h = scan.get(f.engine().coh_all(mu), mu)?;
        let chi = scan.get(f.engine().chi(mu), mu)?;
        let sum = scan.get(h[0].minus(&h[1]).and_then(|x| x.plus(&h[2])).and_then(|x| x.minus(&h[3])), mu)?;
        scan.check(sum == *chi, mu, || "sum of (-1)^i H^i = chi".into())?;
    }
    Ok(scan.checked())
}

pub fn duality(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Duality);
    for mu in square(size) {
        let h = scan.get(f.engine().coh_all(mu), mu)?;
        let reflected = scan.get(f.engine().coh_all(mu.w0_dot()), mu)?;
        let serre = scan.get(f.engine().coh_all(mu.serre_dual()), mu)?;
        for i in 0..4 {
            scan.check(h[i] == reflected[3 - i], mu, || format!("H^{i}(mu) = H^{}(w0.mu)", 3 - i))?;
            scan.check(h[i] == serre[3 - i].dual(), mu, || format!("H^{i}(mu) = dual H^{}(-2rho-mu)", 3 - i))?;
        }
    }
    Ok(scan.checked())
}

pub fn griffith(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Griffith);
    for m in 0..=size {
        for n in 0..=size {
            let mu = chamber(m, n);
            let h = scan.get(f.engine().coh_all(mu), mu)?;
            let inside = scan.get(in_gr(mu, f.prime()), mu)?;
            let both = !h[1].is_zero() && !h[2].is_zero();
            scan.check(both == inside, mu, || format!("H^1, H^2 both nonzero ({both}) iff in Gr ({inside})"))?;
        }
    }
    Ok(scan.checked())
}

pub fn degree1(f: &Filtrations) -> Outcome {
    let mut scan = Scan::new(f, Suite::Degree1);
    let p = f.prime();
    let q = p.get();
    for a in 1..q {
        for r in 0..q {
            for s in 0..=r {
                let mu = chamber(a * q + r, a * q + s);
                let t = restricted_type(restricted_split(mu, p).0, p);
                if t != RestrictedType::Delta && t != RestrictedType::GammaSing {
                    continue;
                }
                let h2 = scan.get(f.engine().core_h2(a * q + r, a * q + s), mu)?;
                let simple = scan.get(f.engine().simple(Weight::new(s, a * q - r - 2)), mu)?;
                scan.check(h2 == *simple, mu, || format!("H^2 = L({s},{})", a * q - r - 2))?;
            }
        }
    }
    Ok(scan.checked())
}

/// Tabulated values at p = 3, whatever prime the caller asked for.
pub fn named() -> Outcome {
    let f = Filtrations::new(Prime::new(3).expect("3 is prime"));
    let mut scan = Scan::new(&f, Suite::Named);
    let w = Weight::new;
    let eng = f.engine();
    let chi10 = scan.get(eng.chi(w(1, 0)), w(1, 0))?;
    let h2 = scan.get(eng.coh_char(2, w(4, -6)), w(4, -6))?;
    let h1 = scan.get(eng.coh_char(1, w(4, -6)), w(4, -6))?;
    scan.check(h2 == *chi10 && h2.dim() == 3, w(4, -6), || "H^2(4,-6) = chi(1,0), dim 3".into())?;
    scan.check(h1 == *chi10, w(4, -6), || "H^1(4,-6) = chi(1,0)".into())?;
    let h2 = scan.get(eng.coh_char(2, w(7, -8)), w(7, -8))?;
    let l03 = scan.get(eng.simple(w(0, 3)), w(7, -8))?;
    scan.check(h2 == *l03 && h2.dim() == 3, w(7, -8), || "H^2(7,-8) = L(0,3), dim 3".into())?;
    let zero = scan.get(f.i_delta_char(Delta::Alpha, w(15, -12)), w(15, -12))?;
    scan.check(zero.character.is_zero(), w(15, -12), || "I_alpha(15,-12) = 0".into())?;
    let unit = scan.get(f.i_delta_char(Delta::Alpha, w(6, -6)), w(6, -6))?;
    scan.check(unit.character == Character::monomial(w(0, 0)), w(6, -6), || "I_alpha(6,-6) = e^(0,0)".into())?;
    Ok(scan.checked())
}

/// Layer count of a D-filtration by restricted type.
pub fn expected_layers(t: RestrictedType) -> usize {
    match t {
        RestrictedType::AlphaBetaSing => 1,
        RestrictedType::AlphaSing | RestrictedType::BetaSing => 3,
        RestrictedType::GammaSing => 4,
        RestrictedType::Delta | RestrictedType::Nabla => 7,
    }
}

pub fn dfilt_weights(f: &Filtrations, weights: impl IntoIterator<Item = Weight>) -> Outcome {
    let mut scan = Scan::new(f, Suite::Dfilt);
    let p = f.prime();
    let q = p.get();
    let table = f.engine().table();
    for mu in weights {
        let layers = d_filtration(mu, p);
        let mut total = Character::zero();
        for l in &layers {
            let c = scan.get(d_layer_char(l, table), mu)?;
            total = scan.get(total.plus(&c), mu)?;
        }
        let zhat = scan.get(zhat_char(mu, p), mu)?;
        scan.check(total == zhat, mu, || "D-layers sum to Zhat(mu)".into())?;
        scan.check(total.dim() == (q * q * q) as i128, mu, || "dim Zhat(mu) = p^3".into())?;
        let t = restricted_type(restricted_split(mu, p).0, p);
        scan.check(layers.len() == expected_layers(t), mu, || {
            format!("{} layers for type {}", expected_layers(t), t.tag())
        })?;
    }
    Ok(scan.checked())
}

pub fn dfilt(f: &Filtrations, size: i64) -> Outcome {
    dfilt_weights(f, square(size))
}

pub fn grand(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Grand);
    for (m, n) in normalized(size, false) {
        let mu = chamber(m, n);
        for j in 1..=2 {
            let layers = scan.get(f.p_hi_d_filtration(j, mu), mu)?;
            let mut total = Character::zero();
            for l in &layers {
                scan.genuine(&l.resolved, mu, "a filtration layer")?;
                total = scan.get(total.plus(&l.resolved), mu)?;
            }
            let h = scan.get(f.engine().coh_char(j, mu), mu)?;
            scan.check(total == h, mu, || format!("p-H^{j}-D-filtration layers sum to H^{j}"))?;
        }
    }
    Ok(scan.checked())
}

pub fn jantzen(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Jantzen);
    let p = f.prime();
    for a in 0..=size {
        for b in 0..=size {
            let lambda = Weight::new(a, b);
            let layers = scan.get(f.jantzen_p_filtration(lambda), lambda)?;
            let mut total = Character::zero();
            for l in &layers {
                scan.genuine(&l.resolved, lambda, "a p-filtration layer")?;
                total = scan.get(total.plus(&l.resolved), lambda)?;
            }
            let chi = scan.get(f.engine().chi(lambda), lambda)?;
            scan.check(total == *chi, lambda, || "p-filtration layers sum to chi(lambda)".into())?;
            let mut lost = Vec::new();
            let mut index = 1;
            for l in d_filtration(lambda, p) {
                if l.e.delta != Delta::Zero {
                    let low = scan.get(f.engine().coh_char(0, l.e.socle()), lambda)?;
                    let top = scan.get(f.engine().coh_char(0, l.e.nu), lambda)?;
                    let mid = scan.get(f.e_coh_char(0, l.e), lambda)?;
                    if scan.get(low.plus(&top), lambda)? != mid {
                        lost.push(index + 1);
                    }
                }
                index += l.e.dim();
            }
            let effaced: Vec<_> = layers.iter().filter(|l| l.status == Status::Effaced).map(|l| l.index).collect();
            scan.check(effaced == lost, lambda, || {
                format!("effaced layers {effaced:?} are those lost to H^1, {lost:?}")
            })?;
        }
    }
    Ok(scan.checked())
}

pub fn idelta(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Idelta);
    let table = f.engine().table();
    for (m, n) in normalized(size, true) {
        let mu = chamber(m, n);
        for delta in [Delta::Alpha, Delta::Beta] {
            let image = scan.get(f.i_delta_char(delta, mu), mu)?.character;
            if image.is_zero() {
                continue;
            }
            let target = scan.get(f.engine().coh_char(2, mu - delta.weight()), mu)?;
            let name = delta.tag();
            scan.genuine(&image, mu, "a boundary image")?;
            scan.check(image.max_multiplicity() <= 1, mu, || format!("I_{name} is multiplicity free"))?;
            scan.check(image.le(&target), mu, || format!("I_{name}(mu) <= H^2(mu - {name})"))?;
            let whole: HashMap<_, _> = scan.get(table.decompose(&target), mu)?.into_iter().collect();
            for (lambda, k) in scan.get(table.decompose(&image), mu)? {
                scan.check(whole.get(&lambda) == Some(&k), mu, || {
                    format!("L{lambda} has the same multiplicity in I_{name}(mu) and H^2(mu - {name})")
                })?;
            }
        }
    }
    Ok(scan.checked())
}

pub fn wall(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Wall);
    let q = f.prime().get();
    for n in 1..=size {
        let mu = chamber(n, n);
        let filtration = scan.get(f.wall_h2_filtration(n), mu)?;
        let h2 = scan.get(f.engine().core_h2(n, n), mu)?;
        if n < q {
            scan.check(h2.is_zero() && filtration.levels.is_empty(), mu, || "H^2(n,-n-2) = 0 below p".into())?;
        }
        let mut digits = Character::zero();
        for layer in &filtration.digit_layers {
            scan.genuine(&layer.character, mu, "a digit layer")?;
            digits = scan.get(digits.plus(&layer.character), mu)?;
        }
        scan.check(digits == h2, mu, || "digit-prefix layers sum to H^2".into())?;
        let mut levels = Character::zero();
        let depth = filtration.depth();
        for level in &filtration.levels {
            scan.genuine(&level.character, mu, "a level")?;
            levels = scan.get(levels.plus(&level.character), mu)?;
            let bound = 1u64 << (depth - level.i);
            scan.check(level.pieces.len() as u64 <= bound, mu, || {
                format!("level {} has at most {bound} pieces", level.i)
            })?;
        }
        scan.check(levels == h2, mu, || "recursive levels sum to H^2".into())?;
    }
    Ok(scan.checked())
}

fn decomposes(scan: &mut Scan, c: &Character, mu: Weight, what: &str) -> std::result::Result<(), Violation> {
    scan.genuine(c, mu, what)?;
    scan.checked += 1;
    match scan.f.engine().table().decompose(c) {
        Ok(_) => Ok(()),
        Err(e) => Err(scan.fail(Some(mu), format!("{what} does not decompose: {e}"))),
    }
}

/// Every H^i(μ) with |x|, |y| ≤ size.
pub fn genuine_cohomology(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Genuine);
    for mu in square(size) {
        for h in scan.get(f.engine().coh_all(mu), mu)?.iter() {
            decomposes(&mut scan, h, mu, "a cohomology character")?;
        }
    }
    Ok(scan.checked())
}

/// Layers of the p-H^j-D-filtrations, j = 1, 2, and the extension
/// cohomology behind them, for 0 ≤ n ≤ m ≤ size.
pub fn genuine_layers(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Genuine);
    for (m, n) in normalized(size, false) {
        let mu = chamber(m, n);
        for j in 1..=2 {
            for l in scan.get(f.p_hi_d_filtration(j, mu), mu)? {
                decomposes(&mut scan, &l.resolved, mu, "a filtration layer")?;
                let e = scan.get(f.e_coh_char(l.j, l.e), mu)?;
                decomposes(&mut scan, &e, mu, "an extension cohomology character")?;
            }
        }
    }
    Ok(scan.checked())
}

/// Boundary images for 0 ≤ n < m ≤ size.
pub fn genuine_images(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Genuine);
    for (m, n) in normalized(size, true) {
        let mu = chamber(m, n);
        for delta in [Delta::Alpha, Delta::Beta] {
            let image = scan.get(f.i_delta_char(delta, mu), mu)?.character;
            decomposes(&mut scan, &image, mu, "a boundary image")?;
        }
    }
    Ok(scan.checked())
}

/// Layers and levels of both wall filtrations for 1 ≤ n ≤ size.
pub fn genuine_walls(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Genuine);
    for n in 1..=size {
        let mu = chamber(n, n);
        let filtration = scan.get(f.wall_h2_filtration(n), mu)?;
        let layers = filtration.digit_layers.iter().map(|l| &l.character);
        for c in layers.chain(filtration.levels.iter().map(|l| &l.character)) {
            decomposes(&mut scan, c, mu, "a wall layer")?;
        }
    }
    Ok(scan.checked())
}

/// p-filtration layers of H⁰(λ) for dominant λ ≤ size.
pub fn genuine_jantzen(f: &Filtrations, size: i64) -> Outcome {
    let mut scan = Scan::new(f, Suite::Genuine);
    for a in 0..=size {
        for b in 0..=size {
            let lambda = Weight::new(a, b);
            for l in scan.get(f.jantzen_p_filtration(lambda), lambda)? {
                decomposes(&mut scan, &l.resolved, lambda, "a p-filtration layer")?;
            }
        }
    }
    Ok(scan.checked())
}

/// Genuineness and simple decomposition of every character family at one box.
pub fn genuine(f: &Filtrations, size: i64) -> Outcome {
    Ok(genuine_cohomology(f, size)?
        + genuine_layers(f, size)?
        + genuine_images(f, size)?
        + genuine_walls(f, size)?
        + genuine_jantzen(f, size)?)
}

/// Runs one suite; `size` of `None` means the suite's default box.
pub fn run(suite: Suite, f: &Filtrations, size: Option<i64>) -> Outcome {
    let size = size.unwrap_or_else(|| suite.default_box(f.prime()));
    match suite {
        Suite::Euler => euler(f, size),
        Suite::Duality => duality(f, size),
        Suite::Griffith => griffith(f, size),
        Suite::Degree1 => degree1(f),
        Suite::Named => named(),
        Suite::Dfilt => dfilt(f, size),
        Suite::Grand => grand(f, size),
        Suite::Jantzen => jantzen(f, size),
        Suite::Idelta => idelta(f, size),
        Suite::Wall => wall(f, size),
        Suite::Genuine => genuine(f, size),
        Suite::All => {
            let mut total = 0;
            for s in Suite::ALL.into_iter().filter(|&s| s != Suite::All) {
                let b = if s == Suite::Named || s == Suite::Degree1 { None } else { Some(size) }.filter(|&b| b > 0);
                total += run(s, f, b)?;
            }
            Ok(total)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("nope"), None);
    }

    #[test]
    fn small_boxes_pass() {
        for q in [2, 3] {
            let f = Filtrations::new(Prime::new(q).unwrap());
            for s in Suite::ALL {
                if s != Suite::All {
                    assert!(run(s, &f, Some(6)).unwrap() > 0, "{s} p={q}");
                }
            }
        }
    }

    #[test]
    fn violations_name_the_weight() {
        let f = Filtrations::new(Prime::new(3).unwrap());
        let scan = Scan::new(&f, Suite::Euler);
        let v = scan.fail(Some(Weight::new(1, -3)), "identity".into());
        assert_eq!(v.to_string(), "euler failed at p=3 mu=(1,-3): identity");
    }
}
