//! Lattice points of the compact region `C = {sum a_i z_i : 0 <= a_i <= 1}`,
//! reduction to the irreducible elements of the cone semigroup, exact
//! decomposition, and assembly of the non-negative integer matrix.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vec, mat_vec, vec_add, vec_scale, vec_sub, IntMatrix, IntVector};
use crate::lp::{cone_combination, resubstitutes, zonotope_combination};
use crate::polytope::{cone_facets, zonotope_facets, FastHalfspaces, Halfspace};

pub const DEFAULT_BUDGET: u64 = 2_000_000;
/// Cap on the number of box prefixes scanned during enumeration.
const PREFIX_LIMIT: u128 = 400_000_000;
const BATCH: usize = 64;

/// Square matrix of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NonNegIntMatrix {
    n: usize,
    entries: Vec<Vec<BigInt>>,
}

impl NonNegIntMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        if entries.iter().flatten().any(Signed::is_negative) {
            return Err(Error::InvalidInput("matrix has a negative entry".into()));
        }
        Ok(NonNegIntMatrix { n, entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        self.entries.clone()
    }

    pub fn has_zero_row_or_column(&self) -> bool {
        (0..self.n).any(|i| {
            self.entries[i].iter().all(Zero::is_zero) || self.entries.iter().all(|r| r[i].is_zero())
        })
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| &self.entries[i][i]).sum()
    }

    /// Principal submatrix on the given indices, in the given order.
    pub fn principal(&self, idx: &[usize]) -> NonNegIntMatrix {
        NonNegIntMatrix {
            n: idx.len(),
            entries: idx.iter().map(|&i| idx.iter().map(|&j| self.entries[i][j].clone()).collect()).collect(),
        }
    }

    pub fn string_entries(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
    }
}

impl Serialize for NonNegIntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NonNegIntMatrix", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("entries", &self.string_entries())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for NonNegIntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            entries: Vec<Vec<String>>,
        }
        let raw = Raw::deserialize(d)?;
        let entries = raw
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.parse::<BigInt>()).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        if entries.len() != raw.n {
            return Err(serde::de::Error::custom("row count does not match n"));
        }
        NonNegIntMatrix::new(entries).map_err(serde::de::Error::custom)
    }
}

/// Lattice points of `C` (zero excluded), optionally reduced to the
/// irreducible elements of the semigroup `cone ∩ Z^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    pub gens: Vec<IntVector>,
    pub cone_generators: Vec<IntVector>,
    /// Inner facet normals of the cone.
    pub facets: Vec<IntVector>,
    /// Sum of the facet normals; positive on every nonzero cone point.
    pub grading: IntVector,
    pub pruned: bool,
    /// Number of points the enumeration produced.
    pub enumerated: usize,
    /// Coefficients in `[0, 1]` exhibiting each generator inside `C`
    /// (filled by pruning).
    pub membership: Vec<Vec<BigRational>>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn in_cone(&self, v: &[BigInt]) -> bool {
        self.facets.iter().all(|n| !dot(n, v).is_negative())
    }

    fn height(&self, v: &[BigInt]) -> BigInt {
        dot(&self.grading, v)
    }
}

fn to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::InvalidInput("coordinate does not fit in 64 bits".into())))
        .collect()
}

/// Every nonzero lattice point of `C`, in lexicographic order.
pub fn enumerate_generators(cone_generators: &[IntVector], budget: u64) -> Result<GeneratorSet> {
    if cone_generators.is_empty() {
        return Err(Error::InvalidInput("empty cone".into()));
    }
    let d = cone_generators[0].len();
    let facets = cone_facets(cone_generators);
    if facets.is_empty() {
        return Err(Error::InvalidInput("cone generators do not span a full-dimensional cone".into()));
    }
    let grading = facets.iter().fold(vec![BigInt::zero(); d], |acc, n| vec_add(&acc, n));
    let mut lo = vec![BigInt::zero(); d];
    let mut hi = vec![BigInt::zero(); d];
    for g in cone_generators {
        for k in 0..d {
            if g[k].is_negative() {
                lo[k] += &g[k];
            } else {
                hi[k] += &g[k];
            }
        }
    }
    let lo = to_i64(&lo)?;
    let hi = to_i64(&hi)?;
    let prefixes: u128 = (0..d - 1).map(|k| (hi[k] - lo[k] + 1) as u128).product();
    if prefixes > PREFIX_LIMIT {
        return Err(Error::BudgetExceeded { budget, found: 0 });
    }
    let zono = zonotope_facets(cone_generators);
    let fast = Scanner::new(&zono, lo.clone(), hi.clone())?;

    let mut points: Vec<Vec<i64>> = Vec::new();
    if d == 1 {
        points = fast.scan(&[], &AtomicU64::new(0), u64::MAX);
    } else {
        let firsts: Vec<i64> = (lo[0]..=hi[0]).collect();
        let seen = AtomicU64::new(0);
        for batch in firsts.chunks(BATCH) {
            let found: Vec<Vec<Vec<i64>>> = batch.par_iter().map(|&x0| fast.scan(&[x0], &seen, budget + 1)).collect();
            points.extend(found.into_iter().flatten());
            let total = seen.load(Ordering::Relaxed);
            if total > budget + 1 {
                return Err(Error::BudgetExceeded { budget, found: total });
            }
        }
    }
    points.retain(|p| p.iter().any(|&x| x != 0));
    if points.len() as u64 > budget {
        return Err(Error::BudgetExceeded {
            budget,
            found: points.len() as u64,
        });
    }
    let gens: Vec<IntVector> = points.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect();
    Ok(GeneratorSet {
        enumerated: gens.len(),
        gens,
        cone_generators: cone_generators.to_vec(),
        facets,
        grading,
        pruned: false,
        membership: Vec::new(),
    })
}

/// Box scan where the last coordinate is solved for directly.
struct Scanner {
    normals: Vec<Vec<i128>>,
    offsets: Vec<i128>,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Scanner {
    fn new(hs: &[Halfspace], lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        let overflow = || Error::InvalidInput("zonotope facets do not fit in machine integers".into());
        let normals = hs
            .iter()
            .map(|h| h.normal.iter().map(|x| x.to_i128().ok_or_else(overflow)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let offsets = hs.iter().map(|h| h.offset.to_i128().ok_or_else(overflow)).collect::<Result<Vec<_>>>()?;
        Ok(Scanner { normals, offsets, lo, hi })
    }

    /// Points with the given prefix; gives up once `seen` passes `stop`.
    fn scan(&self, prefix: &[i64], seen: &AtomicU64, stop: u64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = prefix.to_vec();
        self.descend(&mut cur, &mut out, seen, stop);
        out
    }

    fn descend(&self, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, seen: &AtomicU64, stop: u64) {
        let d = self.lo.len();
        let k = cur.len();
        if k + 1 < d {
            for x in self.lo[k]..=self.hi[k] {
                if seen.load(Ordering::Relaxed) > stop {
                    return;
                }
                cur.push(x);
                self.descend(cur, out, seen, stop);
                cur.pop();
            }
            return;
        }
        let mut t_lo = self.lo[k] as i128;
        let mut t_hi = self.hi[k] as i128;
        for (n, &b) in self.normals.iter().zip(&self.offsets) {
            let s: i128 = n.iter().zip(cur.iter()).map(|(&a, &y)| a * y as i128).sum();
            let rest = b - s;
            let c = n[k];
            if c > 0 {
                t_hi = t_hi.min(Integer::div_floor(&rest, &c));
            } else if c < 0 {
                t_lo = t_lo.max(Integer::div_ceil(&rest, &c));
            } else if rest < 0 {
                return;
            }
            if t_lo > t_hi {
                return;
            }
        }
        seen.fetch_add((t_hi - t_lo + 1) as u64, Ordering::Relaxed);
        for t in t_lo..=t_hi {
            let mut p = cur.clone();
            p.push(t as i64);
            out.push(p);
        }
    }
}

/// Reduces to the irreducible elements: a point is dropped when it is the
/// sum of two nonzero points of `cone ∩ Z^d`. Points are visited by
/// increasing height, and `c` is reducible exactly when `c - g` lies in the
/// cone for an already kept `g` of at most half its height.
pub fn prune_generators(gset: &GeneratorSet) -> Result<GeneratorSet> {
    let cone = FastHalfspaces::from_cone(&gset.facets)
        .ok_or_else(|| Error::InvalidInput("cone facets do not fit in machine integers".into()))?;
    let grading = to_i64(&gset.grading)?;
    let pts: Vec<Vec<i64>> = gset.gens.iter().map(|g| to_i64(g)).collect::<Result<_>>()?;
    let height = |p: &[i64]| -> i128 { grading.iter().zip(p).map(|(&a, &b)| a as i128 * b as i128).sum() };
    let mut order: Vec<(i128, usize)> = pts.iter().enumerate().map(|(i, p)| (height(p), i)).collect();
    order.sort();
    let mut kept: Vec<(i128, usize)> = Vec::new();
    let mut diff = vec![0i64; grading.len()];
    for &(h, i) in &order {
        let c = &pts[i];
        let reducible = kept.iter().take_while(|(hg, _)| 2 * hg <= h).any(|&(_, j)| {
            for (slot, (a, b)) in diff.iter_mut().zip(c.iter().zip(&pts[j])) {
                *slot = a - b;
            }
            cone.contains(&diff)
        });
        if !reducible {
            kept.push((h, i));
        }
    }
    let gens: Vec<IntVector> = kept.iter().map(|&(_, i)| gset.gens[i].clone()).collect();
    let membership: Vec<Vec<BigRational>> = gens
        .par_iter()
        .map(|g| zonotope_combination(&gset.cone_generators, g))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::CertificationFailed("a kept point has no membership witness in C".into()))?;
    Ok(GeneratorSet {
        gens,
        membership,
        pruned: true,
        ..gset.clone()
    })
}

/// Multiplicities `m_i >= 0` with `sum m_i gens_i = target`.
pub fn decompose(gset: &GeneratorSet, target: &[BigInt]) -> Result<Vec<BigInt>> {
    Decomposer::new(gset).decompose(target)
}

/// Decomposition with the cone generators' own decompositions cached.
pub struct Decomposer<'a> {
    gset: &'a GeneratorSet,
    /// Indices of the generators by decreasing height.
    by_height: Vec<usize>,
    cache: HashMap<usize, Vec<BigInt>>,
}

impl<'a> Decomposer<'a> {
    pub fn new(gset: &'a GeneratorSet) -> Self {
        let mut by_height: Vec<usize> = (0..gset.gens.len()).collect();
        let heights: Vec<BigInt> = gset.gens.iter().map(|g| gset.height(g)).collect();
        by_height.sort_by(|&a, &b| heights[b].cmp(&heights[a]).then(a.cmp(&b)));
        let mut dec = Decomposer {
            gset,
            by_height,
            cache: HashMap::new(),
        };
        for m in 0..gset.cone_generators.len() {
            if let Ok(v) = dec.greedy(&gset.cone_generators[m]) {
                dec.cache.insert(m, v);
            }
        }
        dec
    }

    pub fn decompose(&self, target: &[BigInt]) -> Result<Vec<BigInt>> {
        let gset = self.gset;
        if !gset.in_cone(target) {
            return Err(Error::NotInSemigroup);
        }
        let beta = cone_combination(&gset.cone_generators, target).ok_or(Error::NotInSemigroup)?;
        let mut mult = vec![BigInt::zero(); gset.gens.len()];
        let mut rest = target.to_vec();
        for (m, b) in beta.iter().enumerate() {
            let whole = b.floor().to_integer();
            if whole.is_zero() {
                continue;
            }
            let Some(dec) = self.cache.get(&m) else {
                continue;
            };
            for (slot, k) in mult.iter_mut().zip(dec) {
                *slot += k * &whole;
            }
            rest = vec_sub(&rest, &vec_scale(&gset.cone_generators[m], &whole));
        }
        let tail = self.greedy(&rest)?;
        for (slot, k) in mult.iter_mut().zip(tail) {
            *slot += k;
        }
        let sum = gset
            .gens
            .iter()
            .zip(&mult)
            .fold(vec![BigInt::zero(); target.len()], |acc, (g, k)| vec_add(&acc, &vec_scale(g, k)));
        if sum != target {
            return Err(Error::CertificationFailed("decomposition does not re-sum to its target".into()));
        }
        Ok(mult)
    }

    /// Repeatedly subtracts the highest generator that keeps the rest in the cone.
    fn greedy(&self, target: &[BigInt]) -> Result<Vec<BigInt>> {
        let gset = self.gset;
        let mut mult = vec![BigInt::zero(); gset.gens.len()];
        let mut rest = target.to_vec();
        while !is_zero_vec(&rest) {
            let next = self.by_height.iter().find_map(|&i| {
                let r = vec_sub(&rest, &gset.gens[i]);
                gset.in_cone(&r).then_some((i, r))
            });
            let Some((i, r)) = next else {
                return Err(Error::NotInSemigroup);
            };
            // take as many copies as fit at once
            let mut copies = BigInt::from(1);
            let mut r = r;
            loop {
                let again = vec_sub(&r, &gset.gens[i]);
                if !gset.in_cone(&again) {
                    break;
                }
                r = again;
                copies += 1;
            }
            mult[i] += copies;
            rest = r;
        }
        Ok(mult)
    }
}

/// Column `j` holds the multiplicities of `mult * c_j` over the generators.
pub fn assemble_matrix(mult: &IntMatrix, gset: &GeneratorSet) -> Result<NonNegIntMatrix> {
    let dec = Decomposer::new(gset);
    let cols: Vec<Vec<BigInt>> = gset
        .gens
        .par_iter()
        .map(|c| dec.decompose(&mat_vec(mult, c)))
        .collect::<Result<_>>()?;
    let n = gset.gens.len();
    let entries: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    let a = NonNegIntMatrix::new(entries)?;
    if !action_matches(mult, &gset.gens, &a) {
        return Err(Error::CertificationFailed("assembled matrix does not reproduce the action".into()));
    }
    Ok(a)
}

/// Exact check of `mult * c_j = sum_i a_ij c_i` for every column.
pub fn action_matches(mult: &IntMatrix, gens: &[IntVector], a: &NonNegIntMatrix) -> bool {
    a.dim() == gens.len()
        && gens.iter().enumerate().all(|(j, c)| {
            let col: Vec<BigRational> = (0..a.dim()).map(|i| BigRational::from_integer(a.get(i, j).clone())).collect();
            resubstitutes(gens, &col, &mat_vec(mult, c))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, int_matrix, int_vec};

    #[test]
    fn unit_square() {
        let g = enumerate_generators(&identity(2), 100).unwrap();
        assert_eq!(g.gens, int_matrix(&[&[0, 1], &[1, 0], &[1, 1]]));
        let p = prune_generators(&g).unwrap();
        assert_eq!(p.gens, int_matrix(&[&[0, 1], &[1, 0]]));
        assert_eq!(prune_generators(&p).unwrap().gens, p.gens);
        let m = decompose(&p, &int_vec(&[3, 2])).unwrap();
        assert_eq!(m, int_vec(&[2, 3]));
        assert_eq!(decompose(&p, &int_vec(&[-1, 2])), Err(Error::NotInSemigroup));
    }

    #[test]
    fn single_generator() {
        let z = int_matrix(&[&[2, 3]]);
        // a ray is not full-dimensional
        assert!(enumerate_generators(&z, 10).is_err());
        let z = int_matrix(&[&[3]]);
        let g = enumerate_generators(&z, 10).unwrap();
        assert_eq!(g.gens.len(), 3);
        let p = prune_generators(&g).unwrap();
        assert_eq!(p.gens, int_matrix(&[&[1]]));
        let a = assemble_matrix(&int_matrix(&[&[2]]), &p).unwrap();
        assert_eq!(a, NonNegIntMatrix::from_i64(&[&[2]]).unwrap());
        assert_eq!(decompose(&p, &int_vec(&[2])).unwrap(), int_vec(&[2]));
    }

    #[test]
    fn skewed_cone_has_interior_generator() {
        // cone over (1,0) and (1,2): (1,1) is irreducible
        let g = enumerate_generators(&int_matrix(&[&[1, 0], &[1, 2]]), 100).unwrap();
        let p = prune_generators(&g).unwrap();
        assert_eq!(p.gens, int_matrix(&[&[1, 0], &[1, 1], &[1, 2]]));
        for c in &g.gens {
            let m = decompose(&p, c).unwrap();
            assert!(m.iter().all(|k| !k.is_negative()));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let gens = int_matrix(&[&[5, 0], &[0, 5]]);
        match enumerate_generators(&gens, 10) {
            Err(Error::BudgetExceeded { budget: 10, found }) => assert!(found > 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn matrix_serde_round_trip() {
        let a = NonNegIntMatrix::from_i64(&[&[1, 1], &[1, 0]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"n":2,"entries":[["1","1"],["1","0"]]}"#);
        let b: NonNegIntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(NonNegIntMatrix::from_i64(&[&[1, -1], &[0, 0]]).is_err());
        assert!(NonNegIntMatrix::from_i64(&[&[1, 0], &[0, 0]]).unwrap().has_zero_row_or_column());
    }
}
