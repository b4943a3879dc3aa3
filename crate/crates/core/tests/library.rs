use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use planepart::ball::Ball;
use planepart::family::generate_family;
use planepart::lab::{bo_poly, turan_poly};
use planepart::partitions::{find_cached, load_table, pp_ball, pp_exact, read_header, save_table};
use planepart::poly::{ExactPoly, PolyJson};
use planepart::roots::{complex_roots, count_real_roots, largest_real_root, sturm_real_roots};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn ball_table_encloses_exact_values() {
    let exact = pp_exact(600).unwrap();
    let balls = pp_ball(600, 192).unwrap();
    for n in [0, 1, 17, 250, 600] {
        assert!(balls.get(n).contains_int(&BigInt::from(exact.get(n).clone())), "n = {n}");
    }
}

#[test]
fn saved_table_is_found_and_reloaded() {
    let dir = tempfile::tempdir().unwrap();
    let t = pp_exact(150).unwrap();
    let path = dir.path().join(planepart::partitions::cache_file_name(150));
    save_table(&t, &path).unwrap();
    assert_eq!(read_header(&path).unwrap().n, 150);
    assert_eq!(find_cached(dir.path(), 90), Some(path.clone()));
    assert_eq!(find_cached(dir.path(), 151), None);
    let back = load_table(&path).unwrap();
    assert_eq!(back.values(), t.values());
}

#[test]
fn polynomial_json_round_trip() {
    let f = generate_family(12).unwrap();
    let p = turan_poly(&f, 7).unwrap();
    let text = serde_json::to_string(&p.to_json_value(Some(7))).unwrap();
    let v: PolyJson = serde_json::from_str(&text).unwrap();
    assert_eq!(v.n, Some(7));
    assert_eq!(ExactPoly::from_json_value(&v).unwrap(), p);
}

#[test]
fn real_and_complex_root_counts_agree() {
    let f = generate_family(30).unwrap();
    for (a, b) in [(15, 15), (20, 3), (29, 1)] {
        let p = bo_poly(&f, a, b).unwrap();
        let sturm = sturm_real_roots(&p, None).unwrap();
        let with_mult: usize = sturm.real_roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(count_real_roots(&p, None, None).unwrap(), sturm.real_roots.len());
        let all = complex_roots(&p, 128).unwrap();
        assert_eq!(all.complex_roots.iter().filter(|r| r.is_real).count(), with_mult, "({a},{b})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn largest_root_of_product_of_linear_factors(roots in proptest::collection::vec((-40i64..40, 1i64..9), 1..7)) {
        let mut p = ExactPoly::one();
        for &(n, d) in &roots {
            p = p.mul(&ExactPoly::from_i64s(&[-n, d]));
        }
        let tol = q(1, 1 << 20);
        let enc = largest_real_root(&p, &tol).unwrap().unwrap();
        let top = roots.iter().map(|&(n, d)| q(n, d)).max().unwrap();
        prop_assert!(enc.lo <= top && top <= enc.hi);
    }

    #[test]
    fn ball_arithmetic_encloses_rational_results(a in -10_000i64..10_000, b in 1i64..10_000, c in -10_000i64..10_000) {
        let prec = 80;
        let x = q(a, b);
        let y = q(c, 7);
        let bx = Ball::from_rational(&x, prec);
        let by = Ball::from_rational(&y, prec);
        prop_assert!(bx.mul(&by, prec).contains_rational(&(&x * &y)));
        prop_assert!(bx.sub(&by, prec).contains_rational(&(&x - &y)));
        if c != 0 {
            prop_assert!(bx.div(&by, prec).unwrap().contains_rational(&(&x / &y)));
        }
    }
}
