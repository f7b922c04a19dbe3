//! Closed-form upper bounds on the dimension of a realizing matrix,
//! evaluated in extended-exponent floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::{f64_to_rat, rat_to_f64_up, sqrt_upper};
use crate::lattice::LatticeContext;

/// `mantissa * 2^exp2` with `mantissa` in `[1, 2)`, or zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtFloat {
    pub mantissa: f64,
    pub exp2: i64,
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat { mantissa: 0.0, exp2: 0 };

    pub fn from_f64(x: f64) -> ExtFloat {
        assert!(x.is_finite() && x >= 0.0);
        if x == 0.0 {
            return ExtFloat::ZERO;
        }
        let e = x.log2().floor() as i64;
        ExtFloat { mantissa: x / 2f64.powi(e as i32), exp2: e }.normalized()
    }

    /// Rounded up to the next representable value.
    pub fn from_rat_up(q: &BigRational) -> ExtFloat {
        if !q.is_positive() {
            return ExtFloat::ZERO;
        }
        let e = q.numer().bits() as i64 - q.denom().bits() as i64;
        let scaled = if e >= 0 {
            q / BigRational::from_integer(BigInt::one() << e as usize)
        } else {
            q * BigRational::from_integer(BigInt::one() << (-e) as usize)
        };
        ExtFloat {
            mantissa: rat_to_f64_up(&scaled),
            exp2: e,
        }
        .normalized()
    }

    fn normalized(mut self) -> ExtFloat {
        if self.mantissa == 0.0 {
            return ExtFloat::ZERO;
        }
        while self.mantissa >= 2.0 {
            self.mantissa /= 2.0;
            self.exp2 += 1;
        }
        while self.mantissa < 1.0 {
            self.mantissa *= 2.0;
            self.exp2 -= 1;
        }
        self
    }

    pub fn mul(self, o: ExtFloat) -> ExtFloat {
        if self.mantissa == 0.0 || o.mantissa == 0.0 {
            return ExtFloat::ZERO;
        }
        ExtFloat {
            mantissa: self.mantissa * o.mantissa,
            exp2: self.exp2 + o.exp2,
        }
        .normalized()
    }

    pub fn log10(self) -> f64 {
        if self.mantissa == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.mantissa.log10() + self.exp2 as f64 * std::f64::consts::LOG10_2
    }

    pub fn log2(self) -> f64 {
        if self.mantissa == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.mantissa.log2() + self.exp2 as f64
    }

    /// `None` when out of `f64` range.
    pub fn to_f64(self) -> Option<f64> {
        let v = self.mantissa * 2f64.powf(self.exp2 as f64);
        v.is_finite().then_some(v)
    }

    pub fn le(self, o: ExtFloat) -> bool {
        if self.mantissa == 0.0 {
            return true;
        }
        if o.mantissa == 0.0 {
            return false;
        }
        (self.exp2, self.mantissa) <= (o.exp2, o.mantissa)
    }

    /// Decimal scientific notation, e.g. `1.8362e17`.
    pub fn to_scientific(self) -> String {
        if self.mantissa == 0.0 {
            return "0".into();
        }
        let l = self.log10();
        let mut e = l.floor();
        let mut m = 10f64.powf(l - e);
        if m >= 9.99995 {
            m /= 10.0;
            e += 1.0;
        }
        format!("{m:.4}e{e}")
    }
}

impl Serialize for ExtFloat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ExtFloat", 4)?;
        st.serialize_field("mantissa", &self.mantissa)?;
        st.serialize_field("exp2", &self.exp2)?;
        st.serialize_field("log10", &self.log10())?;
        st.serialize_field("scientific", &self.to_scientific())?;
        st.end()
    }
}

/// `1 / (1 - 1/p)` for the plastic constant `p`, the smallest Pisot number.
pub const PISOT_GAP_LIMIT: f64 = 4.079_595_623_491_4;
/// An upper bound on `1/p`.
const INV_PLASTIC_UPPER: (i64, i64) = (7_548_776_662_467, 10_000_000_000_000);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PisotCheck {
    /// `rho` certified below `1/p`.
    pub rho_below_inverse_plastic: bool,
    /// `1 / (1 - rho_upper)`.
    pub gap_factor: f64,
    pub gap_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub d: usize,
    pub rho_upper: f64,
    pub tau_used: f64,
    #[serde(serialize_with = "crate::bounds::ser_big")]
    pub disc_abs: BigInt,
    /// `(8d/(1-rho))^(d^2) tau^(d/2)`.
    pub bound_tau: ExtFloat,
    /// `(8d/(1-rho))^(d^2) sqrt|disc|`.
    pub bound_disc: ExtFloat,
    /// `2^(d^2)` times `bound_disc`.
    pub primitive_bound: ExtFloat,
    pub lattice_label: String,
    pub alpha: Vec<f64>,
    pub kappa_status: String,
    /// Set for quadratic `lambda`, whose minimal dimension is its degree.
    pub quadratic_dimension: Option<usize>,
    pub pisot: Option<PisotCheck>,
    /// Whether `tau_used <= (d/4) |disc|^(1/d)`.
    pub tau_within_banaszczyk: bool,
}

pub(crate) fn ser_big<S: serde::Serializer>(b: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&b.to_string())
}

/// `(8d/(1-rho))^(d^2)` with `rho` replaced by an upper bound.
pub fn growth_factor(d: usize, rho_upper: &BigRational) -> ExtFloat {
    let one = BigRational::one();
    assert!(*rho_upper < one, "rho must be below 1");
    let base = BigRational::from_integer(BigInt::from(8 * d)) / (&one - rho_upper);
    ExtFloat::from_rat_up(&num_traits::pow(base, d * d))
}

/// `tau^(d/2)` rounded up.
fn tau_power(tau: f64, d: usize) -> ExtFloat {
    let t = f64_to_rat(tau);
    let mut v = num_traits::pow(t.clone(), d / 2);
    if d % 2 == 1 {
        v *= sqrt_upper(&t, 80);
    }
    ExtFloat::from_rat_up(&v)
}

pub fn bound_from_tau(d: usize, rho_upper: &BigRational, tau: f64) -> ExtFloat {
    growth_factor(d, rho_upper).mul(tau_power(tau, d))
}

pub fn bound_from_disc(d: usize, rho_upper: &BigRational, disc_abs: &BigInt) -> ExtFloat {
    let root = sqrt_upper(&BigRational::from_integer(disc_abs.clone()), 80);
    growth_factor(d, rho_upper).mul(ExtFloat::from_rat_up(&root))
}

pub fn theorem_bounds(lat: &LatticeContext) -> BoundReport {
    let ctx = &lat.field;
    let d = ctx.degree();
    let rho_upper = ctx.rho_bounds.hi.clone();
    let tau = lat.thickness().tau;
    let disc_abs = ctx.disc.abs();
    let bound_tau = bound_from_tau(d, &rho_upper, tau);
    let bound_disc = bound_from_disc(d, &rho_upper, &disc_abs);
    let primitive_bound = ExtFloat::from_rat_up(&BigRational::from_integer(BigInt::one() << (d * d))).mul(bound_disc);
    let pisot = ctx.is_pisot().then(|| {
        let inv_p = BigRational::new(INV_PLASTIC_UPPER.0.into(), INV_PLASTIC_UPPER.1.into());
        let gap = BigRational::one() / (BigRational::one() - &rho_upper);
        PisotCheck {
            rho_below_inverse_plastic: rho_upper < inv_p,
            gap_factor: rat_to_f64_up(&gap),
            gap_limit: PISOT_GAP_LIMIT,
        }
    });
    let banaszczyk = (d as f64 / 4.0) * crate::arith::big_to_f64(&disc_abs).powf(1.0 / d as f64);
    BoundReport {
        d,
        rho_upper: rat_to_f64_up(&rho_upper),
        tau_used: tau,
        disc_abs,
        bound_tau,
        bound_disc,
        primitive_bound,
        lattice_label: lat.label.to_string(),
        alpha: lat.alpha.weights.clone(),
        kappa_status: "not computed".into(),
        quadratic_dimension: (d == 2).then_some(2),
        pisot,
        tau_within_banaszczyk: tau <= banaszczyk * (1.0 + 1e-12),
    }
}
