use sl3coh::charring::simple_char;
use sl3coh::lattice::{in_gr, restricted_split, restricted_type, RestrictedType};
use sl3coh::{Engine, Prime, Weight};

fn w(a: i64, b: i64) -> Weight {
    Weight::new(a, b)
}

#[test]
fn griffith_iff_both_nonzero() {
    for q in [2, 3, 5] {
        let p = Prime::new(q).unwrap();
        let e = Engine::new(p);
        for m in 0..=100 {
            for n in 0..=100 {
                let mu = w(m, -n - 2);
                let both = !e.coh_char(1, mu).unwrap().is_zero() && !e.coh_char(2, mu).unwrap().is_zero();
                assert_eq!(both, in_gr(mu, p).unwrap(), "p={q} m={m} n={n}");
            }
        }
    }
}

#[test]
fn degree_one_closed_form() {
    for q in [3, 5] {
        let p = Prime::new(q).unwrap();
        let e = Engine::new(p);
        let mut checked = 0;
        for a in 1..q {
            for r in 0..q {
                for s in 0..=r {
                    let mu = w(a * q + r, -(a * q + s) - 2);
                    let t = restricted_type(restricted_split(mu, p).0, p);
                    if t != RestrictedType::Delta && t != RestrictedType::GammaSing {
                        continue;
                    }
                    let expected = simple_char(w(s, a * q - r - 2), p);
                    assert_eq!(e.core_h2(a * q + r, a * q + s).unwrap(), expected, "p={q} a={a} r={r} s={s}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn shifted_wall_is_multiplicity_free() {
    for q in [2, 3, 5] {
        let p = Prime::new(q).unwrap();
        let e = Engine::new(p);
        for d in 1..=2u32 {
            let pd = q.pow(d);
            for a in 1..q {
                for s in 0..pd {
                    let mu = w(a * pd + pd - 2, -a * pd - s - 1);
                    let h2 = e.coh_char(2, mu).unwrap();
                    assert!(h2.max_multiplicity() <= 1, "p={q} d={d} a={a} s={s}");
                }
            }
        }
    }
}

#[test]
fn core_outputs_decompose_into_simples() {
    for q in [2, 3, 5] {
        let p = Prime::new(q).unwrap();
        let e = Engine::new(p);
        for m in 0..=40 {
            for n in 0..=m {
                let pair = e.core(m, n).unwrap();
                for c in [&pair.h1, &pair.h2] {
                    assert!(c.is_genuine());
                    e.table().decompose(c).unwrap();
                }
            }
        }
    }
}
