use std::sync::Arc;

use cayley_capacity::gf::{is_prime, TABLE_LIMIT};
use cayley_capacity::{Error, FieldCtx, FieldElem, FieldSpec, Op};
use proptest::prelude::*;

fn e(i: u32) -> FieldElem {
    FieldElem::from_index_unchecked(i)
}

/// Schoolbook product of coefficient vectors reduced by the field modulus.
fn naive_mul(f: &FieldCtx, x: FieldElem, y: FieldElem) -> FieldElem {
    let p = f.p() as u64;
    let m = f.m() as usize;
    let (a, b) = (f.coeffs(x), f.coeffs(y));
    let mut prod = vec![0u64; 2 * m];
    for i in 0..m {
        for j in 0..m {
            prod[i + j] = (prod[i + j] + a[i] as u64 * b[j] as u64) % p;
        }
    }
    // modulus is monic, high coefficient first
    let modulus: Vec<u64> = f.modulus().iter().rev().map(|&c| c as u64).collect();
    for d in (m..2 * m).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        for (k, &mk) in modulus.iter().enumerate() {
            let slot = d - m + k;
            prod[slot] = (prod[slot] + p * p - c * mk % p) % p;
        }
    }
    let coeffs: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
    f.from_coeffs(&coeffs)
}

fn small_fields() -> Vec<FieldCtx> {
    [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (7, 2), (2, 5)]
        .iter()
        .map(|&(p, m)| FieldCtx::new(p, m, None).unwrap())
        .collect()
}

#[test]
fn multiplication_matches_schoolbook_products() {
    for f in small_fields() {
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(f.mul(x, y), naive_mul(&f, x, y), "GF({}) {x} * {y}", f.spec_string());
            }
        }
    }
}

#[test]
fn exhaustive_unit_checks_up_to_1024() {
    for (p, m) in [(2, 10), (31, 2), (3, 6), (5, 4), (1021, 1), (2, 7)] {
        let f = FieldCtx::new(p, m, None).unwrap();
        assert!(f.q() <= 1 << 10);
        for x in f.elements() {
            assert_eq!(f.add(x, f.neg(x)), FieldElem::ZERO);
            assert_eq!(f.sub(x, x), FieldElem::ZERO);
            assert_eq!(f.pow(x, f.q() as u64), x, "Fermat in GF({})", f.spec_string());
            if !x.is_zero() {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElem::ONE);
            }
            // the trace as a sum of Frobenius conjugates
            let mut conj = x;
            let mut sum = FieldElem::ZERO;
            for _ in 0..m {
                sum = f.add(sum, conj);
                conj = f.pow(conj, p);
            }
            assert!(sum.index() < p as u32, "trace lies in the prime field");
            assert_eq!(sum.index(), f.trace(x));
        }
    }
}

#[test]
fn table_and_direct_paths_agree() {
    let big = FieldCtx::new(2, 13, None).unwrap();
    assert!(!big.has_tables() && big.q() as u64 > TABLE_LIMIT);
    for i in (1..big.q()).step_by(97) {
        let x = e(i);
        assert_eq!(big.mul(x, big.inv(x).unwrap()), FieldElem::ONE);
        assert_eq!(big.mul(x, e(3)), naive_mul(&big, x, e(3)));
    }
    let small = FieldCtx::new(2, 12, None).unwrap();
    assert!(small.has_tables());
    for i in (1..small.q()).step_by(37) {
        for j in (1..small.q()).step_by(211) {
            assert_eq!(small.mul(e(i), e(j)), naive_mul(&small, e(i), e(j)));
        }
    }
}

#[test]
fn character_orthogonality() {
    for f in small_fields() {
        let q = f.q() as f64;
        for a in f.elements() {
            for b in f.elements() {
                // Σ_x chi_a(x) conj(chi_b(x)) = q [a = b]
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for x in f.elements() {
                    let (ar, ai) = (f.char_re::<f64>(a, x), f.char_im::<f64>(a, x));
                    let (br, bi) = (f.char_re::<f64>(b, x), f.char_im::<f64>(b, x));
                    re += ar * br + ai * bi;
                    im += ai * br - ar * bi;
                }
                let expect = if a == b { q } else { 0.0 };
                assert!((re - expect).abs() < 1e-9 && im.abs() < 1e-9, "GF({}) a={a} b={b}", f.spec_string());
            }
        }
    }
}

#[test]
fn quadratic_residues_are_half_the_units() {
    for f in small_fields().into_iter().filter(|f| f.p() != 2) {
        let squares: std::collections::BTreeSet<_> = f.nonzero().map(|x| f.mul(x, x)).collect();
        for x in f.nonzero() {
            assert_eq!(f.is_quadratic_residue(x).unwrap(), squares.contains(&x));
        }
        assert_eq!(squares.len() as u32, (f.q() - 1) / 2);
        assert_eq!(f.is_quadratic_residue(FieldElem::ZERO), Err(Error::ZeroResidue));
    }
}

#[test]
fn field_spec_parsing() {
    let s: FieldSpec = "3^2/1,0,1".parse().unwrap();
    let f = s.build().unwrap();
    let x = e(3);
    assert_eq!(f.mul(x, x), e(2));
    assert_eq!(f.modulus(), vec![1, 0, 1]);
    assert_eq!("5".parse::<FieldSpec>().unwrap().build().unwrap().q(), 5);

    let err = "3^2/1,0,2".parse::<FieldSpec>().unwrap().build().unwrap_err();
    assert!(matches!(err, Error::ReducibleModulus(_)), "{err}");
    for (spec, token) in [("6", "6"), ("x", "x"), ("3^0", "0"), ("3^2/1,5,1", "5"), ("3^2/1,1", "1,1")] {
        match spec.parse::<FieldSpec>() {
            Err(Error::FieldSpec { token: t, .. }) => assert_eq!(t, token, "{spec}"),
            other => panic!("{spec}: {other:?}"),
        }
    }
    assert!(matches!(FieldCtx::new(2, 21, None), Err(Error::FieldTooLarge { .. })));
}

#[test]
fn checked_arithmetic_entry_point() {
    let f = FieldCtx::prime(7).unwrap();
    assert_eq!(f.arith(Op::Mul, e(3), Some(e(5))).unwrap(), e(1));
    assert_eq!(f.arith(Op::Inv, e(0), None), Err(Error::ZeroInverse));
    assert!(matches!(f.arith(Op::Add, e(7), Some(e(1))), Err(Error::ElementOutOfRange { .. })));
    assert!(matches!(f.arith(Op::Sub, e(1), None), Err(Error::MissingOperand(_))));
}

fn field_strategy() -> impl Strategy<Value = Arc<FieldCtx>> {
    prop_oneof![
        Just((2u64, 8u32)),
        Just((3, 5)),
        Just((13, 2)),
        Just((101, 1)),
        Just((2, 14)),
        Just((65521, 1)),
    ]
    .prop_map(|(p, m)| Arc::new(FieldCtx::new(p, m, None).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(f in field_strategy(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let q = f.q();
        let (x, y, z) = (e(a % q), e(b % q), e(c % q));
        prop_assert_eq!(f.add(x, y), f.add(y, x));
        prop_assert_eq!(f.mul(x, y), f.mul(y, x));
        prop_assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.mul(x, y), naive_mul(&f, x, y));
        if !y.is_zero() {
            prop_assert_eq!(f.mul(f.div(x, y).unwrap(), y), x);
        }
        // trace is additive and F_p-linear
        let k = f.from_int(a as i64 % f.p() as i64);
        prop_assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % f.p());
        prop_assert_eq!(f.trace(f.mul(k, x)), (k.index() * f.trace(x)) % f.p());
    }

    #[test]
    fn primality_matches_trial_division(n in 0u64..5000) {
        let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        prop_assert_eq!(is_prime(n), naive);
    }
}
