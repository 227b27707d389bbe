//! Randomized invariants: telescoping gap bound, point canonicalization,
//! polynomial algebra identities, discriminant oracle cross-checks, and
//! simplex-count monotonicity.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use ril_core::exact::{discriminant_oracle, resultant, IntPoly};
use ril_core::heights::{family_constants, tate_gap};
use ril_core::logreal::LogReal;
use ril_core::maps::{presets, ProjPointQ};
use ril_core::monoid::lattice_count_simplex;
use ril_core::random::MeasuredFamily;

fn escape_family() -> MeasuredFamily {
    MeasuredFamily::uniform(vec![presets::power_plus(3, 2), presets::power_plus(5, 2)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // B_S = ln 10 for {x²+3, x²+5}; the telescoping gap never exceeds it.
    #[test]
    fn tate_gap_bounded(
        rho in proptest::collection::vec(0usize..2, 0..=6),
        num in -148i64..=148,
        den in 1i64..=148,
    ) {
        let family = escape_family();
        let q = ProjPointQ::from_i64(&[num, den]);
        let gap = tate_gap(&family, &rho, &q).unwrap();
        prop_assert!(gap <= 10f64.ln() + 1e-9, "gap {gap} exceeds ln 10");
    }

    #[test]
    fn tate_bound_matches_constants(
        rho in proptest::collection::vec(0usize..2, 0..=6),
        num in -148i64..=148,
        den in 1i64..=148,
    ) {
        let family = escape_family();
        let constants = family_constants(&family, &[None, None]).unwrap();
        let q = ProjPointQ::from_i64(&[num, den]);
        let gap = tate_gap(&family, &rho, &q).unwrap();
        prop_assert!(gap <= constants.b_s.value() + 1e-9);
    }

    // canonical form is a fixed point of parse ∘ render
    #[test]
    fn point_render_parse_roundtrip(a in -1000i64..=1000, b in -1000i64..=1000) {
        prop_assume!(a != 0 || b != 0);
        let p = ProjPointQ::from_i64(&[a, b]);
        let q = ProjPointQ::parse(&p.render()).unwrap();
        prop_assert_eq!(p.render(), q.render());
        // scaling leaves the canonical form unchanged
        let scaled = ProjPointQ::from_i64(&[-3 * a, -3 * b]);
        prop_assert_eq!(scaled.render(), p.render());
    }

    #[test]
    fn compose_degree_multiplicative(
        f in proptest::collection::vec(-9i64..=9, 2..=5),
        g in proptest::collection::vec(-9i64..=9, 2..=5),
    ) {
        prop_assume!(*f.last().unwrap() != 0 && *g.last().unwrap() != 0);
        let f = IntPoly::from_i64(&f);
        let g = IntPoly::from_i64(&g);
        prop_assert_eq!(f.compose(&g).degree(), f.degree() * g.degree());
        prop_assert_eq!(f.mul(&g).degree(), f.degree() + g.degree());
    }

    // resultant is multiplicative in its first argument
    #[test]
    fn resultant_multiplicative(
        f in proptest::collection::vec(-5i64..=5, 2..=4),
        g in proptest::collection::vec(-5i64..=5, 2..=4),
        h in proptest::collection::vec(-5i64..=5, 2..=4),
    ) {
        prop_assume!(*f.last().unwrap() != 0 && *g.last().unwrap() != 0 && *h.last().unwrap() != 0);
        let f = IntPoly::from_i64(&f);
        let g = IntPoly::from_i64(&g);
        let h = IntPoly::from_i64(&h);
        let lhs = resultant(&f.mul(&g), &h).unwrap();
        let rhs = resultant(&f, &h).unwrap() * resultant(&g, &h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    // quadratic discriminant b² − 4ac against the Sylvester-matrix oracle
    #[test]
    fn quadratic_discriminant_closed_form(
        a in 1i64..=50, b in -50i64..=50, c in -50i64..=50,
    ) {
        let f = IntPoly::from_i64(&[c, b, a]);
        let disc = discriminant_oracle(&f).unwrap();
        let expected = BigInt::from(b * b - 4 * a * c);
        prop_assert!(disc.denom().magnitude() == &1u32.into());
        prop_assert_eq!(disc.numer().clone(), expected);
    }

    // the simplex count is monotone in B and drops to zero below min weight
    #[test]
    fn lattice_count_monotone(
        b1 in 0.0f64..40.0,
        delta in 0.0f64..10.0,
        w in proptest::collection::vec(0.3f64..3.0, 1..=3),
    ) {
        let wl: Vec<LogReal> = w.iter().map(|&x| LogReal::approx(x)).collect();
        let lo = lattice_count_simplex(&wl, &LogReal::approx(b1));
        let hi = lattice_count_simplex(&wl, &LogReal::approx(b1 + delta));
        prop_assert!(lo <= hi);
        let below = w.iter().cloned().fold(f64::INFINITY, f64::min) * 0.5;
        prop_assert_eq!(lattice_count_simplex(&wl, &LogReal::approx(below)), 1);
    }
}

#[test]
fn resultant_of_shared_root_vanishes() {
    // (x−2)(x+1) and (x−2)(x−5) share the root 2
    let f = IntPoly::from_i64(&[-2, -1, 1]);
    let g = IntPoly::from_i64(&[10, -7, 1]);
    assert!(resultant(&f, &g).unwrap().is_zero());
}
