//! Contour moments of `exp(-x^3/3 - c x)` by Gauss-Legendre quadrature.
//!
//! The contour comes in along `arg x = -2pi/3` and leaves along
//! `arg x = 2pi/3`. With `x = s w`, `w = exp(2pi i/3)`, the outgoing ray gives
//! `z_k = int_0^inf s^k exp(-s^3/3 + c s/2) exp(i theta(s)) ds` with
//! `theta = 2pi(k+1)/3 - c s sqrt(3)/2`, and the incoming ray contributes
//! `-conj(z_k)` for real `c`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::kernel::{BigFloat, Precision, Scalar};

/// Gauss-Legendre order per panel.
const ORDER: usize = 24;
const START_PANELS: usize = 8;
const MAX_PANELS: usize = 4096;
/// Digits carried beyond the requested precision.
const EXTRA_DIGITS: u32 = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn abs(&self) -> BigFloat {
        (self.re.clone() * &self.re + self.im.clone() * &self.im).sqrt()
    }
}

/// Unnormalized `nu_0` and `nu_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicSeeds {
    pub nu0: Complex,
    pub nu1: Complex,
}

impl CubicSeeds {
    /// `nu_1 / nu_0`, which is real for real `c`.
    pub fn normalized_first_moment(&self) -> Result<BigFloat> {
        let scale = self.nu0.abs();
        if !self.nu0.re.is_negligible(&scale) || !self.nu1.re.is_negligible(&self.nu1.abs()) {
            return Err(Error::PrecisionExhausted("cubic moments did not come out purely imaginary".into()));
        }
        Ok(self.nu1.im.clone() / &self.nu0.im)
    }
}

/// `nu_0` and `nu_1` to the precision of `prec`.
pub fn cubic_seeds(c: &BigFloat, prec: Precision) -> Result<CubicSeeds> {
    let mut v = contour_moments(c, &[0, 1], prec)?;
    let nu1 = v.pop().expect("two moments");
    let nu0 = v.pop().expect("two moments");
    Ok(CubicSeeds { nu0, nu1 })
}

/// Unnormalized contour moments `nu_k` for each `k` in `ks`.
///
/// Fails with `InvalidMoment` when `nu_0` is requested and vanishes to working
/// precision, and with `PrecisionExhausted` when the panel budget or the digit
/// budget runs out.
pub fn contour_moments(c: &BigFloat, ks: &[u32], prec: Precision) -> Result<Vec<Complex>> {
    let digits = prec.decimal_digits();
    if digits < 30 {
        return Err(Error::InvalidParameter(format!("cubic quadrature needs at least 30 digits, got {digits}")));
    }
    let mut lost = 0u32;
    for attempt in 0..2 {
        let work = Precision::digits(digits + EXTRA_DIGITS + lost);
        let run = Quadrature::new(c, ks, digits + lost, work)?.run()?;
        let worst = run.lost_digits();
        if worst.is_finite() && (worst.ceil() as u32) + 5 <= EXTRA_DIGITS + lost {
            return Ok(run.values.into_iter().map(|(re, im)| Complex {
                re: BigFloat::from_float(prec, re),
                im: BigFloat::from_float(prec, im),
            })
            .collect());
        }
        if attempt == 1 || !worst.is_finite() || worst > f64::from(8 * digits + 200) {
            if let Some(i) = run.vanishing_mass(ks) {
                return Err(Error::InvalidMoment {
                    weight: 0,
                    k: i64::from(ks[i]),
                    reason: "the total mass vanishes at this parameter (Airy zero)".into(),
                });
            }
            return Err(Error::PrecisionExhausted(format!(
                "cubic quadrature lost {worst:.0} digits to cancellation at c = {}",
                c.to_f64()
            )));
        }
        lost = worst.ceil() as u32 + 5;
    }
    unreachable!("loop returns on its second pass")
}

struct Quadrature {
    c: Float,
    ks: Vec<u32>,
    target: u32,
    bits: u32,
    s_max: Float,
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

struct Run {
    values: Vec<(Float, Float)>,
    mass: Vec<Float>,
}

impl Run {
    /// Largest `log10(sum |w f| / |result|)` over the requested moments.
    fn lost_digits(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.mass)
            .map(|((re, im), m)| {
                let r = Float::with_val(re.prec(), re.hypot_ref(im));
                if r.is_zero() {
                    f64::INFINITY
                } else {
                    log10(m) - log10(&r)
                }
            })
            .fold(0.0, f64::max)
    }

    fn vanishing_mass(&self, ks: &[u32]) -> Option<usize> {
        let i = ks.iter().position(|&k| k == 0)?;
        let (re, im) = &self.values[i];
        let r = Float::with_val(re.prec(), re.hypot_ref(im));
        (r.is_zero() || log10(&self.mass[i]) - log10(&r) > f64::from(re.prec()) * 0.3 - 5.0).then_some(i)
    }
}

fn log10(f: &Float) -> f64 {
    let (m, e) = f.to_f64_exp();
    m.abs().log10() + f64::from(e) * std::f64::consts::LOG10_2
}

impl Quadrature {
    fn new(c: &BigFloat, ks: &[u32], target: u32, work: Precision) -> Result<Self> {
        let bits = work.bits();
        let kmax = ks.iter().copied().max().unwrap_or(0);
        let s_max = truncation(c.to_f64(), kmax, f64::from(target + 10))?;
        let (nodes, weights) = gauss_legendre(ORDER, bits);
        Ok(Quadrature {
            c: Float::with_val(bits, c.inner()),
            ks: ks.to_vec(),
            target,
            bits,
            s_max: Float::with_val(bits, s_max),
            nodes,
            weights,
        })
    }

    fn run(&self) -> Result<Run> {
        let tol = Float::with_val(self.bits, 10).pow(-(self.target as i32 + 5));
        let mut panels = START_PANELS;
        let mut prev = self.integrate(panels);
        loop {
            panels *= 2;
            if panels > MAX_PANELS {
                return Err(Error::PrecisionExhausted(format!(
                    "cubic quadrature did not converge within {MAX_PANELS} panels"
                )));
            }
            let next = self.integrate(panels);
            // measured against sum |w f|; `target` already includes the digits lost to cancellation
            let converged = prev.values.iter().zip(&next.values).zip(&next.mass).all(|((a, b), m)| {
                let dre = Float::with_val(self.bits, &a.0 - &b.0);
                let dim = Float::with_val(self.bits, &a.1 - &b.1);
                let diff = Float::with_val(self.bits, dre.hypot_ref(&dim));
                diff <= Float::with_val(self.bits, &tol * m)
            });
            if converged {
                return Ok(next);
            }
            prev = next;
        }
    }

    /// `nu_k = z_k - conj(z_k)` with `z_k` the outgoing-ray integral on `panels` panels.
    fn integrate(&self, panels: usize) -> Run {
        let b = self.bits;
        let h = Float::with_val(b, &self.s_max / panels as u32);
        let half = Float::with_val(b, &h / 2u32);
        let two_pi_3 = Float::with_val(b, Constant::Pi) * 2u32 / 3u32;
        let freq = Float::with_val(b, 3u32).sqrt() * &self.c / 2u32;
        let n = self.ks.len();
        let mut z_re = vec![Float::new(b); n];
        let mut z_im = vec![Float::new(b); n];
        let mut mass = vec![Float::new(b); n];
        for p in 0..panels {
            let a = Float::with_val(b, &h * p as u32);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let s = Float::with_val(b, &a + &half * (Float::with_val(b, 1u32) + x));
                let ww = Float::with_val(b, w * &half);
                let s3 = Float::with_val(b, s.clone().pow(3u32)) / 3u32;
                let envelope = (Float::with_val(b, &self.c * &s) / 2u32 - s3).exp() * &ww;
                let phase0 = Float::with_val(b, &freq * &s);
                for (i, &k) in self.ks.iter().enumerate() {
                    let amp = Float::with_val(b, s.clone().pow(k)) * &envelope;
                    let theta = Float::with_val(b, &two_pi_3 * (k + 1)) - &phase0;
                    let (sin, cos) = theta.sin_cos(Float::new(b));
                    z_re[i] += Float::with_val(b, &amp * &cos);
                    z_im[i] += Float::with_val(b, &amp * &sin);
                    mass[i] += amp.abs();
                }
            }
        }
        let values = z_re
            .into_iter()
            .zip(z_im)
            .map(|(re, im)| {
                let conj_re = re.clone();
                // z - conj(z): the real parts cancel, the imaginary parts add
                (re - conj_re, im * 2u32)
            })
            .collect();
        Run { values, mass: mass.into_iter().map(|m| m * 2u32).collect() }
    }
}

/// Cutoff `S` with `S^k exp(-S^3/3 + c S/2) < 10^-digits`, past the envelope peak.
fn truncation(c: f64, k: u32, digits: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(Error::InvalidParameter("cubic parameter must be finite".into()));
    }
    let goal = digits * std::f64::consts::LN_10;
    let g = |s: f64| s.powi(3) / 3.0 - c * s / 2.0 - f64::from(k) * s.ln();
    let mut s = 2.0f64.max(c.abs().sqrt() + 2.0);
    while g(s) < goal {
        s *= 1.05;
        if s > 1e6 {
            return Err(Error::PrecisionExhausted("cubic truncation point out of range".into()));
        }
    }
    Ok(s)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
fn gauss_legendre(n: usize, bits: u32) -> (Vec<Float>, Vec<Float>) {
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 8));
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(bits, guess);
        let mut dp = Float::new(bits);
        for _ in 0..100 {
            let (p, d) = legendre(n, &x);
            let dx = Float::with_val(bits, &p / &d);
            x -= &dx;
            dp = d;
            if dx.abs() < eps {
                break;
            }
        }
        let (_, d) = legendre(n, &x);
        dp = if d.is_zero() { dp } else { d };
        let one_minus = Float::with_val(bits, 1u32) - Float::with_val(bits, &x * &x);
        let w = Float::with_val(bits, 2u32) / (one_minus * Float::with_val(bits, &dp * &dp));
        nodes.push(x);
        weights.push(w);
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let b = x.prec();
    let mut p0 = Float::with_val(b, 1u32);
    let mut p1 = x.clone();
    for j in 2..=n {
        let jj = j as u32;
        let p2 = (Float::with_val(b, x * &p1) * (2 * jj - 1) - Float::with_val(b, &p0 * (jj - 1))) / jj;
        p0 = p1;
        p1 = p2;
    }
    let x2 = Float::with_val(b, x * x);
    let d = (Float::with_val(b, x * &p1) - &p0) * n as u32 / (x2 - 1u32);
    (p1, d)
}
