//! Digraph analysis of non-negative integer matrices: strongly connected
//! components, characteristic polynomials, certification that the spectral
//! radius is `lambda`, period, and the block constructions.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{rat_to_string, RatInterval};
use crate::error::{Error, Result};
use crate::intpoly::{rat_poly_divrem, to_rat_poly, IntPolynomial};
use crate::linalg::berkowitz;
use crate::numfield::FieldContext;
use crate::semigrp::NonNegIntMatrix;

/// Strongly connected components, each sorted, listed so that every edge
/// between components goes from an earlier one to a later one.
pub fn strongly_connected_components(a: &NonNegIntMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    let succ: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| !a.get(i, j).is_zero()).collect()).collect();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // iterative Tarjan: (vertex, next successor position)
        let mut call = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if let Some(&w) = succ[v].get(top.1) {
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.reverse();
    comps
}

/// Strongly connected with at least one edge.
pub fn is_irreducible(a: &NonNegIntMatrix) -> bool {
    let comps = strongly_connected_components(a);
    comps.len() == 1 && is_nontrivial(a, &comps[0])
}

fn is_nontrivial(a: &NonNegIntMatrix, comp: &[usize]) -> bool {
    comp.len() > 1 || !a.get(comp[0], comp[0]).is_zero()
}

/// `det(x I - a)`, computed division-free.
pub fn charpoly_exact(a: &NonNegIntMatrix) -> IntPolynomial {
    IntPolynomial::new(berkowitz(a.entries())).expect("characteristic polynomials are monic")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCertificate {
    pub charpoly: IntPolynomial,
    pub minpoly: IntPolynomial,
    /// `charpoly / minpoly`, exact.
    pub quotient: IntPolynomial,
    /// Multiplicity of the minimal polynomial in the characteristic polynomial.
    pub multiplicity: usize,
    /// `quotient` with every factor of the minimal polynomial removed.
    pub cofactor: IntPolynomial,
    /// Rational enclosure of `lambda`; the cofactor has no real root at or
    /// above its lower end.
    #[serde(serialize_with = "ser_interval")]
    pub radius_interval: RatInterval,
    /// How the cofactor was shown to have no real root above `lambda`.
    pub method: String,
    pub precision: u32,
    pub matches_lambda: bool,
}

fn ser_interval<S: serde::Serializer>(r: &RatInterval, s: S) -> std::result::Result<S::Ok, S::Error> {
    [rat_to_string(&r.lo), rat_to_string(&r.hi)].serialize(s)
}

/// Certifies that the spectral radius of an irreducible `a` is `lambda`.
///
/// The spectral radius of a non-negative matrix is one of its eigenvalues
/// and at least `lambda` once `lambda` is an eigenvalue. After dividing out
/// every copy of the minimal polynomial, it suffices that the cofactor has
/// no real root in `[lambda_lo, inf)`.
pub fn certify_spectral_radius(ctx: &FieldContext, a: &NonNegIntMatrix) -> Result<SpectralCertificate> {
    if !is_irreducible(a) {
        return Err(Error::CertificationFailed("matrix is not irreducible".into()));
    }
    let charpoly = charpoly_exact(a);
    let quotient = charpoly.div_exact(&ctx.poly).ok_or(Error::DivisionInexact)?;
    let mut cofactor = quotient.clone();
    let mut multiplicity = 1;
    while cofactor.degree() >= ctx.poly.degree() {
        match cofactor.div_exact(&ctx.poly) {
            Some(q) => {
                cofactor = q;
                multiplicity += 1;
            }
            None => break,
        }
    }
    let mut bits = ctx.precision;
    loop {
        let lambda = ctx.lambda_at_precision(bits)?;
        if let Some(method) = no_real_root_from(&cofactor, &lambda.lo) {
            return Ok(SpectralCertificate {
                charpoly,
                minpoly: ctx.poly.clone(),
                quotient,
                multiplicity,
                cofactor,
                radius_interval: lambda,
                method: method.into(),
                precision: bits,
                matches_lambda: true,
            });
        }
        if bits >= ctx.ceiling {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits = (bits * 2).min(ctx.ceiling);
    }
}

/// `Some(method)` when `q` has no real root in `[from, inf)`.
fn no_real_root_from(q: &IntPolynomial, from: &BigRational) -> Option<&'static str> {
    if q.degree() == 0 {
        return Some("constant");
    }
    if q.eval_rat(from).is_zero() {
        return None;
    }
    let shifted = rat_taylor_shift(q.coeffs(), from);
    if sign_variations(&shifted) == 0 {
        return Some("descartes");
    }
    (sturm_count_above(q.coeffs(), from) == 0).then_some("sturm")
}

/// Coefficients of `q(x + a)`.
fn rat_taylor_shift(q: &[BigInt], a: &BigRational) -> Vec<BigRational> {
    let mut c: Vec<BigRational> = q.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &c[j + 1] * a;
            c[j] += t;
        }
    }
    c
}

fn sign_variations(c: &[BigRational]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(Signed::is_positive).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `q` in `(from, inf)`.
fn sturm_count_above(q: &[BigInt], from: &BigRational) -> usize {
    let p0 = to_rat_poly(q);
    let deriv: Vec<BigInt> = (1..q.len()).map(|k| &q[k] * BigInt::from(k)).collect();
    let mut seq = vec![p0, to_rat_poly(&deriv)];
    loop {
        let n = seq.len();
        let (_, r) = rat_poly_divrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() || r.iter().all(Zero::is_zero) {
            break;
        }
        seq.push(r.into_iter().map(|x| -x).collect());
    }
    let at = |x: &BigRational| -> Vec<BigRational> {
        seq.iter()
            .map(|p| p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c))
            .collect()
    };
    let at_inf: Vec<BigRational> = seq.iter().map(|p| p.last().cloned().unwrap_or_else(BigRational::zero)).collect();
    sign_variations(&at(from)).saturating_sub(sign_variations(&at_inf))
}

/// Principal submatrix on the first component (by size, then vertex list)
/// whose spectral radius certifies as `lambda`.
pub fn extract_lambda_component(
    ctx: &FieldContext,
    a: &NonNegIntMatrix,
) -> Result<(NonNegIntMatrix, Vec<usize>, SpectralCertificate)> {
    let mut comps: Vec<Vec<usize>> = strongly_connected_components(a)
        .into_iter()
        .filter(|c| is_nontrivial(a, c))
        .collect();
    comps.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    let mut last = None;
    for comp in comps {
        let sub = a.principal(&comp);
        match certify_spectral_radius(ctx, &sub) {
            Ok(cert) => return Ok((sub, comp, cert)),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::CertificationFailed(match last {
        Some(e) => format!("no component has spectral radius lambda (last: {e})"),
        None => "matrix has no irreducible component".into(),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Period {
    pub period: u64,
    pub primitive: bool,
}

/// Gcd of the cycle lengths through vertex 0, from BFS levels.
pub fn period_and_primitivity(a: &NonNegIntMatrix) -> Period {
    let n = a.dim();
    let mut level = vec![usize::MAX; n];
    if n == 0 {
        return Period { period: 0, primitive: false };
    }
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut g: u64 = 0;
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if a.get(u, v).is_zero() {
                continue;
            }
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                let diff = (level[u] + 1).abs_diff(level[v]) as u64;
                g = g.gcd(&diff);
            }
        }
    }
    Period {
        period: g,
        primitive: g == 1,
    }
}

/// Boolean powering up to the Wielandt bound `(n-1)^2 + 1`.
pub fn primitive_by_powering(a: &NonNegIntMatrix) -> bool {
    let n = a.dim();
    let pattern: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| !a.get(i, j).is_zero()).collect()).collect();
    let mut power = pattern.clone();
    for _ in 0..(n - 1) * (n - 1) + 1 {
        if power.iter().flatten().all(|&x| x) {
            return true;
        }
        power = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| power[i][k] && pattern[k][j])).collect())
            .collect();
    }
    power.iter().flatten().all(|&x| x)
}

/// The largest-root threshold `1 + 4/(1 - rho)` of the primitive upgrade,
/// using the upper end of `rho`. `Ok(threshold)` when `lambda` clears it.
pub fn upgrade_threshold(ctx: &FieldContext) -> Result<BigRational> {
    let one = BigRational::one();
    let rho = &ctx.rho_bounds.hi;
    if *rho >= one {
        return Err(Error::InvalidInput("spectral ratio bound is not below 1".into()));
    }
    let threshold = &one + BigRational::from_integer(4.into()) / (&one - rho);
    if ctx.lambda.lo >= threshold {
        Ok(threshold)
    } else {
        Err(Error::ThresholdNotMet {
            lambda: ctx.lambda_f64(),
            threshold: crate::arith::rat_to_f64_up(&threshold),
        })
    }
}

pub fn add_identity(a: &NonNegIntMatrix) -> NonNegIntMatrix {
    let mut e = a.to_int_matrix();
    for (i, row) in e.iter_mut().enumerate() {
        row[i] += 1;
    }
    NonNegIntMatrix::new(e).expect("adding the identity keeps entries non-negative")
}

/// Block-cyclic matrix of size `n dim(a)`: identity blocks below the
/// diagonal and `a` in the top-right block, so `B^n` is block diagonal with
/// `a` on the diagonal.
pub fn nth_root_matrix(a: &NonNegIntMatrix, n: usize) -> NonNegIntMatrix {
    assert!(n >= 1);
    if n == 1 {
        return a.clone();
    }
    let m = a.dim();
    let mut e = vec![vec![BigInt::zero(); n * m]; n * m];
    for b in 0..n - 1 {
        for i in 0..m {
            e[(b + 1) * m + i][b * m + i] = BigInt::one();
        }
    }
    for i in 0..m {
        for j in 0..m {
            e[i][(n - 1) * m + j] = a.get(i, j).clone();
        }
    }
    NonNegIntMatrix::new(e).expect("block entries are non-negative")
}

/// `a_ij` parallel edges `i -> j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeShiftGraph {
    pub vertices: usize,
    /// `(from, to, multiplicity)`, multiplicity positive, row-major order.
    #[serde(serialize_with = "ser_edges")]
    pub edges: Vec<(usize, usize, BigInt)>,
}

fn ser_edges<S: serde::Serializer>(e: &[(usize, usize, BigInt)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<(usize, usize, String)> = e.iter().map(|(i, j, m)| (*i, *j, m.to_string())).collect();
    v.serialize(s)
}

pub fn to_edge_shift(a: &NonNegIntMatrix) -> Result<EdgeShiftGraph> {
    if a.has_zero_row_or_column() {
        return Err(Error::DegenerateMatrix);
    }
    let n = a.dim();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !a.get(i, j).is_zero() {
                edges.push((i, j, a.get(i, j).clone()));
            }
        }
    }
    Ok(EdgeShiftGraph { vertices: n, edges })
}

impl EdgeShiftGraph {
    pub fn to_matrix(&self) -> NonNegIntMatrix {
        let mut e = vec![vec![BigInt::zero(); self.vertices]; self.vertices];
        for (i, j, m) in &self.edges {
            e[*i][*j] += m;
        }
        NonNegIntMatrix::new(e).expect("multiplicities are positive")
    }

    pub fn edge_count(&self) -> BigInt {
        self.edges.iter().map(|(_, _, m)| m).sum()
    }

    /// Graphviz source; `expand` draws one arrow per unit of multiplicity,
    /// otherwise one labelled arrow per nonzero entry.
    pub fn to_dot(&self, expand: bool) -> String {
        let mut s = String::from("digraph G {\n");
        for v in 0..self.vertices {
            let _ = writeln!(s, "  v{v};");
        }
        for (i, j, m) in &self.edges {
            if expand {
                let mut k = BigInt::zero();
                while &k < m {
                    let _ = writeln!(s, "  v{i} -> v{j};");
                    k += 1;
                }
            } else {
                let _ = writeln!(s, "  v{i} -> v{j} [label={m}];");
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::bareiss_det;
    use crate::numfield::field_of;

    fn m(rows: &[&[i64]]) -> NonNegIntMatrix {
        NonNegIntMatrix::from_i64(rows).unwrap()
    }

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c).unwrap()
    }

    #[test]
    fn components() {
        assert_eq!(strongly_connected_components(&m(&[&[0, 1], &[1, 0]])), vec![vec![0, 1]]);
        assert_eq!(strongly_connected_components(&m(&[&[1, 1], &[0, 1]])), vec![vec![0], vec![1]]);
        assert_eq!(strongly_connected_components(&m(&[&[2]])), vec![vec![0]]);
        let a = m(&[&[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        assert_eq!(strongly_connected_components(&a), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn charpolys() {
        assert_eq!(charpoly_exact(&m(&[&[1, 1], &[1, 0]])), poly(&[-1, -1, 1]));
        assert_eq!(charpoly_exact(&m(&[&[2]])), poly(&[-2, 1]));
        let p = poly(&[-1, -1, 0, 1]);
        let c = NonNegIntMatrix::new(vec![
            vec![0.into(), 0.into(), 1.into()],
            vec![1.into(), 0.into(), 1.into()],
            vec![0.into(), 1.into(), 0.into()],
        ])
        .unwrap();
        assert_eq!(charpoly_exact(&c), p);
    }

    #[test]
    fn charpoly_matches_determinants() {
        let a = m(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 2]]);
        let chi = charpoly_exact(&a);
        for x in -3i64..=3 {
            let xi: Vec<Vec<BigInt>> = (0..3)
                .map(|i| (0..3).map(|j| if i == j { BigInt::from(x) } else { BigInt::zero() } - a.get(i, j)).collect())
                .collect();
            assert_eq!(chi.eval_int(&x.into()), bareiss_det(&xi));
        }
    }

    #[test]
    fn certificates() {
        let golden = field_of(&[-1, -1, 1]).unwrap();
        let cert = certify_spectral_radius(&golden, &m(&[&[1, 1], &[1, 0]])).unwrap();
        assert!(cert.matches_lambda);
        assert_eq!(cert.quotient, poly(&[1]));
        let plastic = field_of(&[-1, -1, 0, 1]).unwrap();
        let c = m(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]);
        let cert = certify_spectral_radius(&plastic, &c).unwrap();
        assert_eq!(cert.quotient, poly(&[1]));
        let two = field_of(&[-2, 1]).unwrap();
        assert_eq!(certify_spectral_radius(&two, &m(&[&[3]])), Err(Error::DivisionInexact));
    }

    #[test]
    fn larger_cofactor_root_is_detected() {
        let golden = field_of(&[-1, -1, 1]).unwrap();
        // a cofactor x - 2 would put 2 > lambda into the spectrum
        assert_eq!(no_real_root_from(&poly(&[-2, 1]), &golden.lambda.lo), None);
        assert_eq!(no_real_root_from(&poly(&[1, 1]), &golden.lambda.lo), Some("descartes"));
        assert_eq!(no_real_root_from(&poly(&[1]), &golden.lambda.lo), Some("constant"));
    }

    #[test]
    fn sturm_counts() {
        // (x - 1)(x - 2)(x^2 + 1)
        let q = poly(&[2, -3, 3, -3, 1]);
        assert_eq!(sturm_count_above(q.coeffs(), &BigRational::from_integer(0.into())), 2);
        assert_eq!(sturm_count_above(q.coeffs(), &BigRational::new(3.into(), 2.into())), 1);
        assert_eq!(sturm_count_above(q.coeffs(), &BigRational::from_integer(5.into())), 0);
        // x^2 - 2x + 5 has roots 1 +- 2i and a Descartes count of 2 at 0
        let q = poly(&[5, -2, 1]);
        assert_eq!(no_real_root_from(&q, &BigRational::zero()), Some("sturm"));
    }

    #[test]
    fn components_extracted() {
        let golden = field_of(&[-1, -1, 1]).unwrap();
        let a = m(&[&[1, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 0]]);
        let (sub, idx, _) = extract_lambda_component(&golden, &a).unwrap();
        assert_eq!(idx, vec![0, 1]);
        assert_eq!(sub, m(&[&[1, 1], &[1, 0]]));
    }

    #[test]
    fn periods() {
        assert_eq!(period_and_primitivity(&m(&[&[0, 1], &[1, 0]])).period, 2);
        assert!(period_and_primitivity(&m(&[&[1, 1], &[1, 0]])).primitive);
        let c = m(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]);
        assert!(period_and_primitivity(&c).primitive);
        assert!(primitive_by_powering(&c));
        assert!(!primitive_by_powering(&m(&[&[0, 1], &[1, 0]])));
    }

    #[test]
    fn nth_roots() {
        let b = nth_root_matrix(&m(&[&[2]]), 2);
        assert_eq!(b, m(&[&[0, 2], &[1, 0]]));
        assert_eq!(charpoly_exact(&b), poly(&[-2, 0, 1]));
        let b = nth_root_matrix(&m(&[&[1, 1], &[1, 0]]), 2);
        assert_eq!(charpoly_exact(&b), poly(&[-1, 0, -1, 0, 1]));
        assert!(is_irreducible(&b));
    }

    #[test]
    fn upgrade_gate() {
        let plastic = field_of(&[-1, -1, 0, 1]).unwrap();
        assert!(matches!(upgrade_threshold(&plastic), Err(Error::ThresholdNotMet { .. })));
        let big = field_of(&[1, 0, -9, 1]).unwrap();
        let t = upgrade_threshold(&big).unwrap();
        assert!(big.lambda.lo >= t);
    }

    #[test]
    fn edge_shift() {
        let g = to_edge_shift(&m(&[&[2]])).unwrap();
        assert_eq!(g.edge_count(), BigInt::from(2));
        assert_eq!(g.to_dot(true).matches("->").count(), 2);
        let g = to_edge_shift(&m(&[&[1, 1], &[1, 0]])).unwrap();
        assert_eq!(g.vertices, 2);
        assert_eq!(g.edge_count(), BigInt::from(3));
        assert_eq!(g.to_matrix(), m(&[&[1, 1], &[1, 0]]));
        assert!(g.to_dot(false).contains("v0 -> v1 [label=1];"));
        assert_eq!(to_edge_shift(&m(&[&[1, 0], &[1, 0]])), Err(Error::DegenerateMatrix));
    }
}
