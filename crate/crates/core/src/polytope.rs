//! Exact integer polyhedral geometry: facet normals of hulls, cones and
//! zonotopes, and exact volumes of lattice polytopes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{bareiss_det, dot, rank_int, vec_sub, IntVector};

/// The half-space `normal . x <= offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: IntVector,
    pub offset: BigInt,
}

impl Halfspace {
    pub fn contains(&self, x: &[BigInt]) -> bool {
        dot(&self.normal, x) <= self.offset
    }
}

/// Vector orthogonal to `d - 1` vectors of `Z^d` (signed maximal minors),
/// divided by its content. Zero when the vectors are dependent.
pub fn orthogonal_vector(vs: &[&[BigInt]], d: usize) -> IntVector {
    debug_assert_eq!(vs.len() + 1, d);
    let mut n: IntVector = (0..d)
        .map(|k| {
            let minor: Vec<Vec<BigInt>> = vs
                .iter()
                .map(|v| v.iter().enumerate().filter(|&(c, _)| c != k).map(|(_, x)| x.clone()).collect())
                .collect();
            let det = bareiss_det(&minor);
            if k % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect();
    let g = n.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in n.iter_mut() {
            *x /= &g;
        }
    }
    n
}

fn subsets(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn affine_rank(points: &[IntVector]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let diffs: Vec<IntVector> = points[1..].iter().map(|p| vec_sub(p, &points[0])).collect();
    if diffs.is_empty() {
        0
    } else {
        rank_int(&diffs)
    }
}

/// Facets of the convex hull of full-dimensional integer points, as
/// half-spaces with primitive normals, sorted.
pub fn hull_facets(points: &[IntVector]) -> Vec<Halfspace> {
    let d = points[0].len();
    let mut out = BTreeSet::new();
    subsets(points.len(), d, |idx| {
        let base = &points[idx[0]];
        let diffs: Vec<IntVector> = idx[1..].iter().map(|&i| vec_sub(&points[i], base)).collect();
        let refs: Vec<&[BigInt]> = diffs.iter().map(Vec::as_slice).collect();
        let n = orthogonal_vector(&refs, d);
        if n.iter().all(Zero::is_zero) {
            return;
        }
        let b = dot(&n, base);
        let mut above = false;
        let mut below = false;
        for p in points {
            match dot(&n, p).cmp(&b) {
                std::cmp::Ordering::Greater => above = true,
                std::cmp::Ordering::Less => below = true,
                std::cmp::Ordering::Equal => {}
            }
            if above && below {
                return;
            }
        }
        if above {
            out.insert(Halfspace {
                normal: n.iter().map(|x| -x).collect(),
                offset: -b,
            });
        } else {
            out.insert(Halfspace { normal: n, offset: b });
        }
    });
    out.into_iter().collect()
}

/// Exact volume of the convex hull of full-dimensional integer points,
/// summing pyramids over facets.
pub fn hull_volume(points: &[IntVector]) -> BigRational {
    let d = points[0].len();
    if d == 1 {
        let lo = points.iter().map(|p| &p[0]).min().unwrap();
        let hi = points.iter().map(|p| &p[0]).max().unwrap();
        return BigRational::from_integer(hi - lo);
    }
    let apex = &points[0];
    let mut total = BigRational::zero();
    for f in hull_facets(points) {
        let height = &f.offset - dot(&f.normal, apex);
        if height.is_zero() {
            continue;
        }
        let k = f.normal.iter().position(|x| !x.is_zero()).unwrap();
        let face: Vec<IntVector> = points
            .iter()
            .filter(|p| dot(&f.normal, p) == f.offset)
            .map(|p| p.iter().enumerate().filter(|&(c, _)| c != k).map(|(_, x)| x.clone()).collect())
            .collect();
        let projected = hull_volume(&face);
        total += BigRational::from_integer(height) * projected / BigRational::from_integer(f.normal[k].abs());
    }
    total / BigRational::from_integer(BigInt::from(d))
}

/// Primitive inner facet normals `n` (`n . x >= 0` on the cone) of the
/// cone spanned by integer generators. Empty unless the cone is
/// full-dimensional.
pub fn cone_facets(gens: &[IntVector]) -> Vec<IntVector> {
    let d = gens[0].len();
    if rank_int(gens) < d {
        return Vec::new();
    }
    if d == 1 {
        let pos = gens.iter().any(|g| g[0].is_positive());
        let neg = gens.iter().any(|g| g[0].is_negative());
        return match (pos, neg) {
            (true, false) => vec![vec![BigInt::one()]],
            (false, true) => vec![vec![-BigInt::one()]],
            _ => Vec::new(),
        };
    }
    let mut out = BTreeSet::new();
    subsets(gens.len(), d - 1, |idx| {
        let refs: Vec<&[BigInt]> = idx.iter().map(|&i| gens[i].as_slice()).collect();
        let n = orthogonal_vector(&refs, d);
        if n.iter().all(Zero::is_zero) {
            return;
        }
        let mut pos = false;
        let mut neg = false;
        for g in gens {
            let v = dot(&n, g);
            if v.is_positive() {
                pos = true;
            } else if v.is_negative() {
                neg = true;
            }
        }
        match (pos, neg) {
            (true, false) => {
                out.insert(n);
            }
            (false, true) => {
                out.insert(n.iter().map(|x| -x).collect());
            }
            _ => {}
        }
    });
    out.into_iter().collect()
}

/// Half-spaces of the zonotope `{sum t_i g_i : 0 <= t_i <= 1}`.
pub fn zonotope_facets(gens: &[IntVector]) -> Vec<Halfspace> {
    let d = gens[0].len();
    let support = |n: &IntVector| -> BigInt {
        gens.iter()
            .map(|g| dot(n, g))
            .filter(|v| v.is_positive())
            .sum()
    };
    let mut normals = BTreeSet::new();
    if d == 1 {
        normals.insert(vec![BigInt::one()]);
    } else {
        subsets(gens.len(), d - 1, |idx| {
            let refs: Vec<&[BigInt]> = idx.iter().map(|&i| gens[i].as_slice()).collect();
            let n = orthogonal_vector(&refs, d);
            if !n.iter().all(Zero::is_zero) {
                normals.insert(n);
            }
        });
    }
    let mut out = Vec::with_capacity(2 * normals.len());
    for n in normals {
        let neg: IntVector = n.iter().map(|x| -x).collect();
        out.push(Halfspace {
            offset: support(&n),
            normal: n,
        });
        out.push(Halfspace {
            offset: support(&neg),
            normal: neg,
        });
    }
    out
}

/// Half-spaces converted to machine integers for hot membership loops.
#[derive(Debug, Clone)]
pub struct FastHalfspaces {
    normals: Vec<Vec<i64>>,
    offsets: Vec<i128>,
}

impl FastHalfspaces {
    /// `None` when some coefficient does not fit in an `i64`.
    pub fn new(hs: &[Halfspace]) -> Option<Self> {
        let normals = hs
            .iter()
            .map(|h| h.normal.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let offsets = hs.iter().map(|h| h.offset.to_i128()).collect::<Option<Vec<_>>>()?;
        Some(FastHalfspaces { normals, offsets })
    }

    /// Inner cone normals as the half-spaces `-n . x <= 0`.
    pub fn from_cone(normals: &[IntVector]) -> Option<Self> {
        let hs: Vec<Halfspace> = normals
            .iter()
            .map(|n| Halfspace {
                normal: n.iter().map(|x| -x).collect(),
                offset: BigInt::zero(),
            })
            .collect();
        Self::new(&hs)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(n, &b)| {
            let v: i128 = n.iter().zip(x).map(|(&a, &y)| a as i128 * y as i128).sum();
            v <= b
        })
    }
}
