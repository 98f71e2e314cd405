use proptest::prelude::*;
use sl3coh::dfilt::{d_filtration, Delta, EDescriptor};
use sl3coh::hifilt::{h2_vanishing_pattern, three_layer_params, Filtrations, Part, Status};
use sl3coh::lattice::{leading_split, restricted_split, restricted_type, valuation, RestrictedType};
use sl3coh::{Character, Prime, Weight};

fn w(a: i64, b: i64) -> Weight {
    Weight::new(a, b)
}

fn prime(q: i64) -> Prime {
    Prime::new(q).unwrap()
}

fn sum<'a>(cs: impl IntoIterator<Item = &'a Character>) -> Character {
    cs.into_iter().fold(Character::zero(), |acc, c| acc.plus(c).unwrap())
}

/// I_δ(m, −n−2) by recursive splitting on the leading digit of m, without
/// touching the cohomology of any E_δ.
fn image_by_splitting(f: &Filtrations, delta: Delta, m: i64, n: i64) -> Character {
    let p = f.prime();
    let eng = f.engine();
    let mu = w(m, -n - 2);
    let k = match delta {
        Delta::Alpha if m % p.get() != 0 => return Character::zero(),
        Delta::Alpha => valuation(m, p),
        _ => valuation(n + 2, p),
    };
    if k == 0 || m - n >= p.pow(k).unwrap() {
        return Character::zero();
    }
    let (d, a, r) = leading_split(m, p).unwrap();
    let top = p.pow(d).unwrap();
    let s = n - a * top;
    let (near, far) = match delta {
        Delta::Alpha => {
            if r == 0 {
                return eng.coh_char(2, mu - Weight::ALPHA).unwrap();
            }
            assert!(0 <= r - p.pow(k).unwrap() && r - p.pow(k).unwrap() < s && s < r, "m={m} n={n}");
            (Delta::Alpha, Delta::Beta)
        }
        _ => {
            if k >= d {
                return eng.coh_char(2, mu - Weight::BETA).unwrap();
            }
            assert!(0 <= s && s < r && r <= top - 2, "m={m} n={n}");
            (Delta::Beta, Delta::Alpha)
        }
    };
    let first = eng.twisted_row(a, d).unwrap().times(&image_by_splitting(f, near, r, s)).unwrap();
    let mirrored = image_by_splitting(f, far, top - s - 2, top - r - 2).transpose();
    first.plus(&eng.twisted_row(a - 2, d).unwrap().times(&mirrored).unwrap()).unwrap()
}

#[test]
fn layer_sums_recover_cohomology() {
    for q in [2, 3, 5] {
        let f = Filtrations::new(prime(q));
        for m in 0..=q * q + q {
            for n in 0..=m {
                let mu = w(m, -n - 2);
                for j in 0..4 {
                    let layers = f.p_hi_d_filtration(j, mu).unwrap();
                    let total = sum(layers.iter().map(|l| &l.resolved));
                    assert_eq!(total, f.engine().coh_char(j, mu).unwrap(), "p={q} mu={mu:?} j={j}");
                    assert!(layers.iter().all(|l| l.resolved.is_genuine()));
                }
            }
        }
    }
}

#[test]
fn layer_sums_off_the_normalized_cone() {
    for q in [2, 3] {
        let f = Filtrations::new(prime(q));
        for a in -12..=12 {
            for b in -12..=12 {
                let mu = w(a, b);
                for j in 0..4 {
                    let total = sum(f.p_hi_d_filtration(j, mu).unwrap().iter().map(|l| &l.resolved));
                    assert_eq!(total, f.engine().coh_char(j, mu).unwrap(), "p={q} mu={mu:?} j={j}");
                }
            }
        }
    }
}

#[test]
fn boundary_images_match_splitting() {
    for q in [2, 3, 5] {
        let f = Filtrations::new(prime(q));
        for m in 1..=if q == 5 { 60 } else { 80 } {
            for n in 0..m {
                for delta in [Delta::Alpha, Delta::Beta] {
                    let image = f.i_delta_char(delta, w(m, -n - 2)).unwrap();
                    assert_eq!(image.character, image_by_splitting(&f, delta, m, n), "p={q} {delta:?} m={m} n={n}");
                }
            }
        }
    }
}

#[test]
fn boundary_images_inside_target() {
    for q in [2, 3] {
        let p = prime(q);
        let f = Filtrations::new(p);
        let table = f.engine().table();
        for m in 1..=80 {
            for n in 0..m {
                for delta in [Delta::Alpha, Delta::Beta] {
                    let mu = w(m, -n - 2);
                    let image = f.i_delta_char(delta, mu).unwrap().character;
                    let target = f.engine().coh_char(2, mu - delta.weight()).unwrap();
                    assert!(image.is_genuine() && image.le(&target), "p={q} {delta:?} {mu:?}");
                    assert!(image.max_multiplicity() <= 1, "p={q} {delta:?} {mu:?}");
                    let whole: std::collections::HashMap<_, _> =
                        table.decompose(&target).unwrap().into_iter().collect();
                    for (lambda, k) in table.decompose(&image).unwrap() {
                        assert_eq!(whole.get(&lambda), Some(&k), "p={q} {delta:?} {mu:?} L{lambda:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn boundary_images_split_on_leading_digit() {
    let mut checked = 0;
    for q in [2, 3, 5] {
        let p = prime(q);
        let f = Filtrations::new(p);
        for d in 1..=2 {
            let top = p.pow(d).unwrap();
            for a in 1..q {
                for delta in [Delta::Alpha, Delta::Beta] {
                    let (lo, hi) = if delta == Delta::Alpha { (0, top - 1) } else { (-1, top - 2) };
                    for r in lo..=hi {
                        for s in lo..r {
                            let mu = w(a * top + r, -a * top - s - 2);
                            let whole = f.i_delta_char(delta, mu).unwrap().character;
                            let near = f.boundary_image(delta, w(r, -s - 2)).unwrap();
                            let far = f.boundary_image(delta, w(r - top, top - s - 2)).unwrap();
                            let eng = f.engine();
                            let split = eng
                                .twisted_row(a, d)
                                .unwrap()
                                .times(&near)
                                .unwrap()
                                .plus(&eng.twisted_row(a - 2, d).unwrap().times(&far).unwrap())
                                .unwrap();
                            assert_eq!(whole, split, "p={q} {delta:?} {mu:?}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn vanishing_pattern_agrees_with_recursion() {
    let mut overlaps = 0;
    for q in [2, 3, 5] {
        let p = prime(q);
        let f = Filtrations::new(p);
        for x in -30..=30 {
            for y in -30..=30 {
                for delta in [Delta::Alpha, Delta::Beta] {
                    let e = EDescriptor::new(delta, w(x, y));
                    if !h2_vanishing_pattern(e, p) {
                        continue;
                    }
                    for e in [e, e.transpose()] {
                        if three_layer_params(e, p).unwrap().is_some() {
                            let c = f.h2_by_recursion(e).unwrap().unwrap();
                            assert!(c.is_zero(), "p={q} {e:?}");
                            overlaps += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(overlaps > 0);
}

#[test]
fn effacements_match_boundary_images() {
    for q in [2, 3, 5] {
        let f = Filtrations::new(prime(q));
        for m in q..=q * q + q {
            for n in 0..=m {
                let mu = w(m, -n - 2);
                let h1 = f.hi_layer_report(1, mu).unwrap();
                let h2 = f.hi_layer_report(2, mu).unwrap();
                assert_eq!(h1.total, f.engine().coh_char(1, mu).unwrap());
                assert_eq!(h2.total, f.engine().coh_char(2, mu).unwrap());
                for lost in h2.layers.iter().filter(|l| l.status != Status::Plain) {
                    assert_eq!(lost.part, Part::Socle, "p={q} {mu:?}");
                    let partner = h1.layers.iter().find(|l| l.index == lost.index + 1).expect("partner layer");
                    let removed = f
                        .engine()
                        .simple(lost.nu0)
                        .unwrap()
                        .times(&f.engine().coh_char(2, lost.nu1()).unwrap().twist(1, f.prime()).unwrap())
                        .unwrap();
                    let kept = &lost.resolved;
                    assert_eq!(partner.image.as_ref().unwrap().dim(), removed.dim() - kept.dim(), "p={q} {mu:?}");
                }
            }
        }
    }
}

fn delta_weight(p: Prime, m: i64, n: i64) -> bool {
    restricted_type(restricted_split(w(m, -n - 2), p).0, p) == RestrictedType::Delta
}

#[test]
fn delta_type_without_second_digit_effaces_fifth_layer() {
    let mut seen = 0;
    for q in [3, 5, 7] {
        let p = prime(q);
        let f = Filtrations::new(p);
        for m in q..=q * q * q {
            for n in 0..q.min(m + 1) {
                if !delta_weight(p, m, n) {
                    continue;
                }
                let mu = w(m, -n - 2);
                assert!(f.engine().coh_char(2, mu).unwrap().is_zero());
                let report = f.hi_layer_report(1, mu).unwrap();
                assert_eq!(report.indices_with(Status::Effaced), vec![5], "p={q} {mu:?}");
                assert!(report.indices_with(Status::Partial).is_empty());
                assert!(report.layers.iter().all(|l| [1, 2, 3, 4, 5, 7, 8, 9].contains(&l.index)));
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn delta_type_at_top_of_block_effaces_third_layer() {
    let (mut effaced, mut quiet) = (0, 0);
    for q in [3, 5] {
        let p = prime(q);
        let f = Filtrations::new(p);
        for m in q..=q * q * q {
            for n in 0..=m {
                if !delta_weight(p, m, n) {
                    continue;
                }
                let mu = w(m, -n - 2);
                let (d, _, _) = leading_split(m, p).unwrap();
                let h2 = f.hi_layer_report(2, mu).unwrap();
                if !(h2.subcase.s >= 0 && h2.subcase.r == p.pow(d - 1).unwrap() - 1) {
                    continue;
                }
                let h1 = f.hi_layer_report(1, mu).unwrap();
                let third = d_filtration(mu, p)[2].e.socle();
                if f.engine().coh_char(2, third).unwrap().is_zero() {
                    assert!(h2.indices_with(Status::Effaced).is_empty() && h1.indices_with(Status::Partial).is_empty());
                    quiet += 1;
                } else {
                    assert_eq!(h2.indices_with(Status::Effaced), vec![3], "p={q} {mu:?}");
                    assert_eq!(h1.indices_with(Status::Partial), vec![4], "p={q} {mu:?}");
                    assert!(h1.indices_with(Status::Effaced).is_empty());
                    effaced += 1;
                }
            }
        }
    }
    assert!(effaced > 0 && quiet > 0);
}

#[test]
fn doubly_singular_reports_factor_through_frobenius() {
    for q in [2, 3, 5] {
        let p = prime(q);
        let f = Filtrations::new(p);
        let steinberg = f.engine().simple(w(q - 1, q - 1)).unwrap();
        for m1 in 1..=q + 1 {
            for n1 in 0..m1 {
                let mu = w(q * m1 + q - 1, -q * n1 - 1 - q);
                for i in 1..=2 {
                    let report = f.hi_layer_report(i, mu).unwrap();
                    assert_eq!(report.case, RestrictedType::AlphaBetaSing);
                    let expect =
                        steinberg.times(&f.engine().coh_char(i, w(m1, -n1 - 2)).unwrap().twist(1, p).unwrap()).unwrap();
                    assert_eq!(report.total, expect, "p={q} {mu:?}");
                }
            }
        }
    }
}

#[test]
fn jantzen_layers_and_effacements() {
    for q in [3, 5] {
        let p = prime(q);
        let f = Filtrations::new(p);
        for a in 0..=q * q {
            for b in 0..=q * q {
                let lambda = w(a, b);
                let layers = f.jantzen_p_filtration(lambda).unwrap();
                assert_eq!(
                    sum(layers.iter().map(|l| &l.resolved)),
                    *f.engine().chi(lambda).unwrap(),
                    "p={q} {lambda:?}"
                );
                let mut expected = Vec::new();
                let mut index = 1;
                for l in d_filtration(lambda, p) {
                    if l.e.delta != Delta::Zero {
                        let low = f.engine().coh_char(0, l.e.socle()).unwrap();
                        let top = f.engine().coh_char(0, l.e.nu).unwrap();
                        let mid = f.e_coh_char(0, l.e).unwrap();
                        if low.plus(&top).unwrap() != mid {
                            expected.push(index + 1);
                        }
                    }
                    index += l.e.dim();
                }
                let effaced: Vec<_> = layers.iter().filter(|l| l.status == Status::Effaced).map(|l| l.index).collect();
                assert_eq!(effaced, expected, "p={q} {lambda:?}");
            }
        }
    }
}

#[test]
fn jantzen_examples() {
    let f = Filtrations::new(prime(5));
    let layers = f.jantzen_p_filtration(w(1, 1)).unwrap();
    let live: Vec<_> = layers.iter().filter(|l| !l.resolved.is_zero()).collect();
    assert_eq!(live.len(), 1);
    assert_eq!(live[0].nu1(), w(0, 0));
    assert_eq!(live[0].resolved, *f.engine().chi(w(1, 1)).unwrap());
    let single = f.jantzen_p_filtration(w(9, 14)).unwrap();
    assert_eq!(single.len(), 1);
    assert_eq!(single[0].nu0, w(4, 4));
    let nabla = f.jantzen_p_filtration(w(1, 11)).unwrap();
    assert_eq!(nabla.iter().filter(|l| l.status == Status::Effaced).map(|l| l.index).collect::<Vec<_>>(), vec![5]);
}

#[test]
fn wall_filtrations_sum_to_h2() {
    for q in [2, 3, 5] {
        let p = prime(q);
        let f = Filtrations::new(p);
        for n in 1..=q * q * q {
            let wall = f.wall_h2_filtration(n).unwrap();
            let h2 = f.engine().core_h2(n, n).unwrap();
            assert_eq!(sum(wall.digit_layers.iter().map(|l| &l.character)), h2, "p={q} n={n}");
            assert_eq!(sum(wall.levels.iter().map(|l| &l.character)), h2, "p={q} n={n}");
            let depth = wall.depth();
            for level in &wall.levels {
                assert!(level.pieces.len() as u64 <= 1 << (depth - level.i), "p={q} n={n}");
            }
            for layer in &wall.digit_layers {
                let quotient = f.engine().table().weyl(layer.weyl);
                let outer = f.engine().simple(layer.outer).unwrap();
                assert!(layer.character.is_genuine());
                assert!(layer.character.le(&outer.times(&quotient).unwrap()), "p={q} n={n}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn extension_euler_characteristic(q in prop::sample::select(vec![2i64, 3, 5]), x in -40i64..40, y in -40i64..40, alpha in any::<bool>()) {
        let f = Filtrations::new(prime(q));
        let e = EDescriptor::new(if alpha { Delta::Alpha } else { Delta::Beta }, w(x, y));
        if let Ok(h) = f.e_coh_all(e) {
            let euler = h[0].minus(&h[1]).unwrap().plus(&h[2]).unwrap().minus(&h[3]).unwrap();
            let chi = f.engine().chi(e.nu).unwrap().plus(&f.engine().chi(e.socle()).unwrap()).unwrap();
            prop_assert_eq!(euler, chi);
            prop_assert!(h.iter().all(Character::is_genuine));
        }
    }

    #[test]
    fn extension_transpose_symmetry(q in prop::sample::select(vec![2i64, 3, 5]), x in -40i64..40, y in -40i64..40, alpha in any::<bool>()) {
        let f = Filtrations::new(prime(q));
        let e = EDescriptor::new(if alpha { Delta::Alpha } else { Delta::Beta }, w(x, y));
        if let (Ok(h), Ok(t)) = (f.e_coh_all(e), f.e_coh_all(e.transpose())) {
            for i in 0..4 {
                prop_assert_eq!(&h[i].transpose(), &t[i]);
            }
        }
    }
}
