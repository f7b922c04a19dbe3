mod common;

use common::{charpoly_oracle, ints};
use perron_core::matana::primitive_by_powering;
use perron_core::{brute_force_dpf, build_field_context, FieldOptions, IntPolynomial, SearchMode, SearchOptions};
use proptest::prelude::*;

fn divides(num: &[num_bigint::BigInt], den: &[num_bigint::BigInt]) -> bool {
    let (n, d) = (num.len() - 1, den.len() - 1);
    let mut rem = num.to_vec();
    for k in (0..=n - d).rev() {
        let c = rem[k + d].clone();
        for j in 0..=d {
            rem[k + j] -= &c * &den[j];
        }
    }
    rem.iter().all(|x| x.sign() == num_bigint::Sign::NoSign)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// x^2 - a x - b with a, b >= 1 is realized by its companion matrix.
    #[test]
    fn quadratics_with_positive_coefficients_have_dimension_two(a in 1i64..=6, b in 1i64..=6) {
        let p = IntPolynomial::from_i64(&[-b, -a, 1]).unwrap();
        let Ok(ctx) = build_field_context(&p, &FieldOptions::default()) else { return Ok(()) };
        let res = brute_force_dpf(&ctx, &SearchOptions::new(SearchMode::Primitive)).unwrap();
        prop_assert_eq!(res.n_found, Some(2));
    }

    #[test]
    fn search_witnesses_are_sound(a in -3i64..=3, b in -3i64..=3, c in -3i64..=-1) {
        let p = IntPolynomial::from_i64(&[c, b, a, 1]).unwrap();
        let Ok(ctx) = build_field_context(&p, &FieldOptions::default()) else { return Ok(()) };
        for mode in [SearchMode::Irreducible, SearchMode::Primitive] {
            let mut opts = SearchOptions::new(mode);
            opts.n_max = 4;
            opts.budget = 5_000_000;
            let Ok(res) = brute_force_dpf(&ctx, &opts) else { continue };
            if let Some(w) = &res.witness {
                prop_assert!(common::irreducible_oracle(w.entries()));
                prop_assert!(divides(&charpoly_oracle(w.entries()), p.coeffs()));
                if mode == SearchMode::Primitive {
                    prop_assert!(primitive_by_powering(w));
                }
                prop_assert_eq!(Some(w.dim()), res.n_found);
            } else {
                prop_assert_eq!(res.exhausted.clone(), (3..=4).collect::<Vec<_>>());
            }
            // no non-negative matrix of size d has negative trace
            if a.is_positive() {
                prop_assert!(res.n_found != Some(3));
            }
        }
    }
}

#[test]
fn degree_one_returns_the_integer() {
    let ctx = build_field_context(&IntPolynomial::from_i64(&[-5, 1]).unwrap(), &FieldOptions::default()).unwrap();
    let res = brute_force_dpf(&ctx, &SearchOptions::new(SearchMode::Primitive)).unwrap();
    assert_eq!(res.n_found, Some(1));
    assert_eq!(res.witness.unwrap().entries().to_vec(), vec![ints(&[5])]);
}
