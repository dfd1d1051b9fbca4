use nimtree::{binomial_series, Parity, PowerTable, TriSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const TRUNC: usize = 7;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn term() -> impl Strategy<Value = (usize, u32, u32, BigRational)> {
    (0..=TRUNC, 0u32..4, 0u32..4, -6i64..=6, 1i64..=4).prop_map(|(i, j, k, n, d)| (i, j, k, rat(n, d)))
}

fn series() -> impl Strategy<Value = TriSeries> {
    prop::collection::vec(term(), 0..10).prop_map(|t| TriSeries::from_terms(TRUNC, t))
}

/// Series with a nonzero constant term and no `u`, `r` at degree zero.
fn invertible() -> impl Strategy<Value = TriSeries> {
    (series(), prop::sample::select(vec![-3i64, -1, 1, 2, 5])).prop_map(|(s, c0)| {
        let tail = TriSeries::from_terms(TRUNC, s.terms().filter(|t| t.0 > 0));
        tail.add(&TriSeries::monomial(TRUNC, 0, 0, 0, rat(c0, 1)))
            .unwrap()
    })
}

fn univariate() -> impl Strategy<Value = TriSeries> {
    prop::collection::vec(-4i64..=4, TRUNC + 1).prop_map(|c| {
        let c: Vec<BigRational> = c.into_iter().map(|v| rat(v, 1)).collect();
        TriSeries::univariate(TRUNC, &c)
    })
}

const PARITIES: [Parity; 2] = [Parity::Even, Parity::Odd];

proptest! {
    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&TriSeries::one(TRUNC)).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.neg().neg(), a);
    }

    #[test]
    fn square_args_is_a_homomorphism(a in series(), b in series()) {
        let lhs = a.mul(&b).unwrap().square_args();
        let rhs = a.square_args().mul(&b.square_args()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_round_trips(a in invertible()) {
        let inv = a.invert().unwrap();
        prop_assert_eq!(a.mul(&inv).unwrap(), TriSeries::one(TRUNC));
        prop_assert_eq!(inv.invert().unwrap(), a);
    }

    #[test]
    fn parity_filters_partition(a in series()) {
        let mut total = TriSeries::zero(TRUNC);
        for u in PARITIES {
            for r in PARITIES {
                let piece = a.parity_filter(u, r);
                prop_assert_eq!(piece.parity_filter(u, r), piece.clone());
                total = total.add(&piece).unwrap();
            }
        }
        prop_assert_eq!(total, a.clone());
        prop_assert_eq!(a.parity_filter(Parity::Any, Parity::Any), a);
    }

    #[test]
    fn parity_filters_match_sign_flips(a in series()) {
        let half = rat(1, 2);
        let quarter = rat(1, 4);
        let flip_u = a.negate_vars(true, false);
        let flip_r = a.negate_vars(false, true);
        let flip_both = a.negate_vars(true, true);
        let odd_r = a.sub(&flip_r).unwrap().scale(&half);
        prop_assert_eq!(a.parity_filter(Parity::Any, Parity::Odd), odd_r);
        let odd_u = a.sub(&flip_u).unwrap().scale(&half);
        prop_assert_eq!(a.parity_filter(Parity::Odd, Parity::Any), odd_u);
        let even_even = a.add(&flip_u).unwrap().add(&flip_r).unwrap().add(&flip_both).unwrap().scale(&quarter);
        prop_assert_eq!(a.parity_filter(Parity::Even, Parity::Even), even_even);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in series(), b in series(), u in univariate(), r in univariate()) {
        let lhs = a.mul(&b).unwrap().substitute(&u, &r).unwrap();
        let rhs = a.substitute(&u, &r).unwrap().mul(&b.substitute(&u, &r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_tables_agree(alpha_num in -3i64..=3, alpha_den in 1i64..=2, w in 1usize..3) {
        let alpha = rat(alpha_num, alpha_den);
        let base = binomial_series(&alpha, w, TRUNC);
        let closed = PowerTable::binomial(&alpha, w, 4, TRUNC);
        let repeated = PowerTable::from_series(&base, 4, TRUNC).unwrap();
        let m = TriSeries::from_terms(TRUNC, (0..=4u32).map(|j| (0, j, 0, BigRational::one())));
        let one = TriSeries::one(TRUNC);
        let one_table = PowerTable::from_series(&one, 0, TRUNC).unwrap();
        prop_assert_eq!(
            m.substitute_with(&closed, &one_table).unwrap(),
            m.substitute_with(&repeated, &one_table).unwrap()
        );
    }

    #[test]
    fn truncation_commutes_with_products(a in series(), b in series(), t in 0..=TRUNC) {
        let lhs = a.mul(&b).unwrap().truncate(t).unwrap();
        let rhs = a.truncate(t).unwrap().mul(&b.truncate(t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn binomial_half_squares_to_base() {
    // (1 - z)^{-1/2} squared is 1/(1 - z).
    let s = binomial_series(&rat(-1, 2), 1, 12);
    let sq = s.mul(&s).unwrap();
    for i in 0..=12 {
        assert_eq!(sq.coefficient(i, 0, 0).unwrap(), BigRational::one());
    }
    assert!(!s.coefficient(3, 0, 0).unwrap().is_zero());
}
