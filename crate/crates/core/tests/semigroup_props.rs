mod common;

use common::ints;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use perron_core::lattice::build_lattice;
use perron_core::semigrp::{assemble_matrix, action_matches, enumerate_generators, prune_generators, Decomposer};
use perron_core::{build_field_context, construct, AlphaWeights, ConstructOptions, FieldOptions, IntPolynomial};
use proptest::prelude::*;

fn det3(a: &[i64], b: &[i64], c: &[i64]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Cramer coordinates of `x` over the columns `g` (numerators, common denominator `det`).
fn cramer(g: &[Vec<i64>], x: &[i64]) -> ([i64; 3], i64) {
    let det = det3(&g[0], &g[1], &g[2]);
    let num = [det3(x, &g[1], &g[2]), det3(&g[0], x, &g[2]), det3(&g[0], &g[1], x)];
    if det < 0 {
        (num.map(|v| -v), -det)
    } else {
        (num, det)
    }
}

/// Nonzero lattice points of the parallelepiped spanned by three independent vectors.
fn parallelepiped_points(g: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let lo: Vec<i64> = (0..3).map(|k| g.iter().map(|v| v[k].min(0)).sum()).collect();
    let hi: Vec<i64> = (0..3).map(|k| g.iter().map(|v| v[k].max(0)).sum()).collect();
    let mut out = Vec::new();
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                let p = [x, y, z];
                let (num, det) = cramer(g, &p);
                if p != [0, 0, 0] && num.iter().all(|&c| 0 <= c && c <= det) {
                    out.push(p.to_vec());
                }
            }
        }
    }
    out
}

fn basis3() -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 3)
        .prop_filter("independent", |g| det3(&g[0], &g[1], &g[2]) != 0)
}

fn in_simplicial_cone(g: &[Vec<i64>], x: &[i64]) -> bool {
    cramer(g, x).0.iter().all(|&c| c >= 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_brute_force(g in basis3()) {
        let gens: Vec<Vec<BigInt>> = g.iter().map(|v| ints(v)).collect();
        let set = enumerate_generators(&gens, 1_000_000).unwrap();
        let mut got: Vec<Vec<BigInt>> = set.gens.clone();
        got.sort();
        let mut expected: Vec<Vec<BigInt>> = parallelepiped_points(&g).iter().map(|p| ints(p)).collect();
        expected.sort();
        prop_assert_eq!(set.enumerated, expected.len());
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn pruned_set_is_minimal_and_generates(g in basis3()) {
        let gens: Vec<Vec<BigInt>> = g.iter().map(|v| ints(v)).collect();
        let all = enumerate_generators(&gens, 1_000_000).unwrap();
        let pruned = prune_generators(&all).unwrap();
        let small: Vec<Vec<i64>> = pruned.gens.iter().map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        let points = parallelepiped_points(&g);
        // irreducible: no kept generator is a sum of two nonzero cone points
        for k in &small {
            for p in &points {
                let rest: Vec<i64> = k.iter().zip(p).map(|(a, b)| a - b).collect();
                prop_assert!(rest == vec![0, 0, 0] || !in_simplicial_cone(&g, &rest), "{:?} = {:?} + {:?}", k, p, rest);
            }
        }
        // every point of C decomposes over the kept generators
        let dec = Decomposer::new(&pruned);
        for p in &all.gens {
            let c = dec.decompose(p).unwrap();
            prop_assert!(c.iter().all(|x| !x.is_negative()));
            let mut sum = vec![BigInt::zero(); 3];
            for (ci, gk) in c.iter().zip(&pruned.gens) {
                for j in 0..3 {
                    sum[j] += ci * &gk[j];
                }
            }
            prop_assert_eq!(&sum, p);
        }
        prop_assert_eq!(pruned.membership.len(), pruned.gens.len());
    }
}

fn field(coeffs: &[i64], assume: bool) -> perron_core::FieldContext {
    let opts = FieldOptions { assume_irreducible: assume, ..FieldOptions::default() };
    build_field_context(&IntPolynomial::from_i64(coeffs).unwrap(), &opts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multiplication_commutes_with_embedding(v in proptest::collection::vec(-20i64..=20, 4), which in 0usize..4) {
        let fields: [(&[i64], bool); 4] =
            [(&[-1, -1, 1], false), (&[-1, -1, 0, 1], false), (&[-1, -1, -1, 1], false), (&[-1, 0, 0, -1, 1], true)];
        let (coeffs, assume) = fields[which];
        let ctx = field(coeffs, assume);
        let lat = build_lattice(&ctx, &AlphaWeights::ones(ctx.places())).unwrap();
        let d = ctx.degree();
        let v = ints(&v[..d]);
        let lhs = ctx.embed(&ctx.apply_mult(&v)).coords;
        let lat_image: Vec<BigInt> = (0..d).map(|r| (0..d).map(|c| &lat.mult_matrix[r][c] * &v[c]).sum()).collect();
        let lhs_lattice = lat.embed(&lat_image).coords;
        let x = ctx.embed(&v).coords;
        let scale = 1.0 + x.iter().fold(0.0f64, |m, y| m.max(y.abs()));
        let mut o = 0;
        for root in &ctx.roots {
            let z = root.center();
            if root.is_real {
                let want = z.re * x[o];
                prop_assert!((lhs[o] - want).abs() < 1e-9 * scale);
                o += 1;
            } else {
                let want = z * num_complex::Complex64::new(x[o], x[o + 1]);
                prop_assert!((lhs[o] - want.re).abs() < 1e-9 * scale && (lhs[o + 1] - want.im).abs() < 1e-9 * scale);
                o += 2;
            }
        }
        let lv = lat.embed(&v).coords;
        o = 0;
        for root in &ctx.roots {
            let z = root.center();
            if root.is_real {
                prop_assert!((lhs_lattice[o] - z.re * lv[o]).abs() < 1e-9 * scale);
                o += 1;
            } else {
                let want = z * num_complex::Complex64::new(lv[o], lv[o + 1]);
                prop_assert!((lhs_lattice[o] - want.re).abs() < 1e-9 * scale);
                o += 2;
            }
        }
    }
}

#[test]
fn constructed_matrix_records_the_action() {
    for (coeffs, assume) in [(&[-1i64, -1, 0, 1][..], false), (&[-1, -1, -1, 1][..], false), (&[-1, 0, 0, -1, 1][..], true)] {
        let run = construct(&field(coeffs, assume), &ConstructOptions::default()).unwrap();
        let mult = &run.lattice.mult_matrix;
        assert!(action_matches(mult, &run.generators.gens, &run.full_matrix));
        assert_eq!(assemble_matrix(mult, &run.generators).unwrap(), run.full_matrix);
        // independent: column j of the matrix writes mult * g_j over the generators
        let d = mult.len();
        for (j, g) in run.generators.gens.iter().enumerate() {
            let image: Vec<BigInt> = (0..d).map(|r| (0..d).map(|c| &mult[r][c] * &g[c]).sum()).collect();
            let mut sum = vec![BigInt::zero(); d];
            for (i, gi) in run.generators.gens.iter().enumerate() {
                let m = run.full_matrix.get(i, j);
                for k in 0..d {
                    sum[k] += m * &gi[k];
                }
            }
            assert_eq!(sum, image, "{coeffs:?}: column {j}");
        }
    }
}
