mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use star53k::golden::{canonical_associate, primes_up_to_norm};
use star53k::{build_field, GoldenInt};

use common::{associate_invariance, odd_primes, square_agreement, Oracle};

fn gi() -> impl Strategy<Value = GoldenInt> {
    (-10_000i64..10_000, -10_000i64..10_000).prop_map(|(a, b)| GoldenInt::new(a, b))
}

#[test]
fn square_agreement_oracle_all_primes_to_200() {
    let primes = odd_primes(200);
    assert!(primes.len() > 30);
    let n = square_agreement(&primes, 500, &mut ChaCha8Rng::seed_from_u64(0x5eed)).unwrap();
    assert_eq!(n, 500 * primes.len());
}

#[test]
fn legendre_associate_invariance() {
    associate_invariance(&odd_primes(200), 500, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
}

#[test]
fn field_reduction_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in odd_primes(200) {
        let ctx = build_field(&p).unwrap();
        let o = Oracle::new(&p);
        for _ in 0..200 {
            let w = GoldenInt::new(rng.gen_range(-9_999i64..9_999), rng.gen_range(-9_999i64..9_999));
            let e = ctx.reduce(&w);
            let (x, y) = o.reduce(&w);
            assert_eq!((e.x as i64, e.y as i64), (x, y), "w = {w}, p = {p}");
        }
    }
}

#[test]
fn every_nonzero_element_has_order_dividing_q_minus_1() {
    for p in primes_up_to_norm(200) {
        let ctx = build_field(&p).unwrap();
        for e in ctx.elements().filter(|e| *e != ctx.zero()) {
            assert_eq!(ctx.pow(e, (ctx.q - 1) as u64), ctx.one(), "p = {p}");
        }
    }
}

proptest! {
    #[test]
    fn ring_laws(x in gi(), y in gi(), z in gi()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x - &x, GoldenInt::zero());
        prop_assert_eq!(&x * &GoldenInt::one(), x.clone());
    }

    #[test]
    fn norm_is_multiplicative(x in gi(), y in gi()) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn text_round_trip(x in gi()) {
        prop_assert_eq!(x.to_string().parse::<GoldenInt>().unwrap(), x);
    }

    #[test]
    fn canonical_form_is_associate_invariant(x in gi(), n in -6i64..6, neg in any::<bool>()) {
        prop_assume!(!x.is_zero());
        let mut u = GoldenInt::tau_pow(n);
        if neg {
            u = -u;
        }
        prop_assert_eq!(canonical_associate(&(&u * &x)).unwrap(), canonical_associate(&x).unwrap());
    }

    #[test]
    fn reduction_is_a_ring_homomorphism(idx in 0usize..40, x in gi(), y in gi()) {
        let primes = primes_up_to_norm(200);
        let p = &primes[idx % primes.len()];
        let ctx = build_field(p).unwrap();
        prop_assert_eq!(ctx.reduce(&(&x + &y)), ctx.add(ctx.reduce(&x), ctx.reduce(&y)));
        prop_assert_eq!(ctx.reduce(&(&x * &y)), ctx.mul(ctx.reduce(&x), ctx.reduce(&y)));
        prop_assert_eq!(ctx.reduce(&GoldenInt::tau()), ctx.tau_image);
        prop_assert_eq!(ctx.reduce(&p.value), ctx.zero());
    }
}
