//! Closed-form constants and control functions relating the distortion
//! properties, and tabulated control functions with composition.

use serde::{Deserialize, Serialize};

use crate::error::{QhError, Result};

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(QhError::Domain(msg()))
    }
}

fn check_c(name: &str, c: f64) -> Result<()> {
    require(c.is_finite() && c >= 1.0, || {
        format!("{name} must be >= 1, got {c}")
    })
}

fn check_h(h: f64) -> Result<()> {
    require(h.is_finite() && h >= 1.0, || {
        format!("H must be >= 1, got {h}")
    })
}

fn check_q(q: f64) -> Result<()> {
    require(q > 0.0 && q < 1.0, || {
        format!("q must lie in (0, 1), got {q}")
    })
}

/// Ring property constants `(M, α, β) = (2H²(H+1), 3, 6c/q)`.
pub fn ring_constants(h: f64, c: f64, q: f64) -> Result<(f64, f64, f64)> {
    check_h(h)?;
    check_c("c", c)?;
    check_q(q)?;
    Ok((2.0 * h * h * (h + 1.0), 3.0, 6.0 * c / q))
}

/// Bound on the number of chain steps, `log 2 / (log(1+2c) - log(2c)) + 1`.
pub fn k0(c: f64) -> Result<f64> {
    check_c("c", c)?;
    Ok(std::f64::consts::LN_2 / ((1.0 + 2.0 * c).ln() - (2.0 * c).ln()) + 1.0)
}

/// `q' = 1 / (2 + c)^3`.
pub fn qprime(c: f64) -> Result<f64> {
    check_c("c", c)?;
    Ok((2.0 + c).powi(3).recip())
}

/// Quasiconvexity constant of the length metric, `(1 + √3) / 2`.
pub fn c0() -> f64 {
    (1.0 + 3f64.sqrt()) / 2.0
}

/// Locality `q = 1 / ((2 + c0)^3 c)`.
pub fn q_length(c: f64) -> Result<f64> {
    check_c("c", c)?;
    Ok(((2.0 + c0()).powi(3) * c).recip())
}

/// `H = k0 · M^{k0}` where `M = θ(2c/(1+2c))`.
pub fn h_from_theta(k0: f64, theta_m: f64) -> Result<f64> {
    require(theta_m.is_finite() && theta_m > 0.0, || {
        format!("θ(2c/(1+2c)) must be positive, got {theta_m}")
    })?;
    Ok(k0 * theta_m.powf(k0))
}

/// Parameters of the ring-to-relative control function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingTheta {
    pub c: f64,
    pub cprime: f64,
    pub m: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl RingTheta {
    pub fn new(c: f64, cprime: f64, m: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_c("c", c)?;
        check_c("c'", cprime)?;
        require(m > 0.0 && alpha > 1.0 && beta >= alpha, || {
            format!("need M > 0 and 1 < alpha <= beta, got M={m}, alpha={alpha}, beta={beta}")
        })?;
        Ok(RingTheta {
            c,
            cprime,
            m,
            alpha,
            beta,
        })
    }

    /// `B = 2c (2cα)^3 β`, so that `t0 = 1/B`.
    pub fn scale(&self) -> f64 {
        2.0 * self.c * (2.0 * self.c * self.alpha).powi(3) * self.beta
    }

    /// `A = 2 M² c' log(2cα)`.
    pub fn numerator(&self) -> f64 {
        2.0 * self.m * self.m * self.cprime * (2.0 * self.c * self.alpha).ln()
    }

    /// `t0 = 1 / (2c (2cα)^3 β)`.
    pub fn t0(&self) -> f64 {
        self.scale().recip()
    }

    /// `θ(t) = A / log(1 / (B t))` on `(0, t0)`; `θ(0) = 0`.
    pub fn theta(&self, t: f64) -> Result<f64> {
        require(t >= 0.0 && t < self.t0(), || {
            format!("θ is defined on [0, t0) with t0 = {}, got {t}", self.t0())
        })?;
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(self.numerator() / (1.0 / (self.scale() * t)).ln())
    }

    /// `θ^{-1}(s) = e^{-A/s} / B` for `s > 0`.
    pub fn theta_inverse(&self, s: f64) -> Result<f64> {
        require(s > 0.0, || {
            format!("θ^-1 needs a positive argument, got {s}")
        })?;
        Ok((-self.numerator() / s).exp() / self.scale())
    }

    /// `t1 = min{t0, θ^{-1}(1/(3c'))} / 2`.
    pub fn t1(&self) -> f64 {
        let inv = self
            .theta_inverse(1.0 / (3.0 * self.cprime))
            .expect("positive argument");
        0.5 * self.t0().min(inv)
    }

    /// `ψ(t) = 3c' θ(2t)` on `[0, t0/2)`.
    pub fn psi(&self, t: f64) -> Result<f64> {
        Ok(3.0 * self.cprime * self.theta(2.0 * t)?)
    }
}

/// `θ(t)` for the ring constants `(M, α, β)`; errors unless `0 <= t < t0`.
pub fn ring_theta_at(t: f64, c: f64, cprime: f64, m: f64, alpha: f64, beta: f64) -> Result<f64> {
    RingTheta::new(c, cprime, m, alpha, beta)?.theta(t)
}

/// Piecewise-linear-then-Möbius bound on `k` in terms of `|x-y|/δ(x)`:
/// `3c(3c+1)/(3c-1) t` up to `1/(3c)`, then `(1+t)/(1-t)`.
pub fn theta0_relative(t: f64, c: f64) -> Result<f64> {
    check_c("c", c)?;
    require((0.0..1.0).contains(&t), || {
        format!("θ0 is defined on [0, 1), got {t}")
    })?;
    if t <= 1.0 / (3.0 * c) {
        Ok(3.0 * c * (3.0 * c + 1.0) / (3.0 * c - 1.0) * t)
    } else {
        Ok((1.0 + t) / (1.0 - t))
    }
}

/// `θ = ψ ∘ φ ∘ θ0` with `ψ(s) = e^s - 1`.
pub fn theta_from_semisolid(t: f64, c: f64, phi: impl Fn(f64) -> f64) -> Result<f64> {
    Ok(phi(theta0_relative(t, c)?).exp_m1())
}

/// The three-branch control function built from a relativity function `θ`
/// and the weak coefficient `H`: `(H/M) θ(t)` up to `2c/(1+2c)`, a line up
/// to 1, then `(1+ct) H^{1+ct}`, where `M = θ(2c/(1+2c))`.
pub fn eta_prime(t: f64, c: f64, h: f64, theta: impl Fn(f64) -> f64) -> Result<f64> {
    check_c("c", c)?;
    require(t >= 0.0, || format!("η' is defined for t >= 0, got {t}"))?;
    let knot = 2.0 * c / (1.0 + 2.0 * c);
    if t <= knot {
        let theta_m = theta(knot);
        require(theta_m > 0.0, || "θ(2c/(1+2c)) must be positive".into())?;
        Ok(h / theta_m * theta(t))
    } else if t <= 1.0 {
        let (slope, intercept) = eta_line(c, h);
        Ok(slope * t + intercept)
    } else {
        let e = 1.0 + c * t;
        Ok(e * h.powf(e))
    }
}

/// Slope and intercept of the middle branch of [`eta_prime`].
pub fn eta_line(c: f64, h: f64) -> (f64, f64) {
    let top = (1.0 + c) * h.powf(1.0 + c);
    let slope = (1.0 + 2.0 * c) * (top - h);
    let intercept = -2.0 * c * top + (1.0 + 2.0 * c) * h;
    (slope, intercept)
}

/// `(K1, K2, K)` with `K1 = 3c'² K0 (2+c)^{2α} q^{-α}`, `K2 = 2φ(t0)/t0`.
pub fn semisolid_exponents(
    phi_t0: f64,
    t0: f64,
    k0_tv: f64,
    alpha_exp: f64,
    c: f64,
    cprime: f64,
    q: f64,
) -> Result<(f64, f64, f64)> {
    require(t0 > 0.0, || format!("t0 must be positive, got {t0}"))?;
    require(phi_t0 > 0.0 && k0_tv > 0.0 && q > 0.0, || {
        "φ(t0), K0 and q must be positive".into()
    })?;
    require(alpha_exp > 0.0 && alpha_exp <= 1.0, || {
        format!("alpha_exp must lie in (0, 1], got {alpha_exp}")
    })?;
    check_c("c", c)?;
    check_c("c'", cprime)?;
    let k1 = 3.0 * cprime * cprime * k0_tv * (2.0 + c).powf(2.0 * alpha_exp) * q.powf(-alpha_exp);
    let k2 = 2.0 * phi_t0 / t0;
    Ok((k1, k2, k1.max(k2)))
}

/// A nondecreasing function on `[0, ∞)` with `φ(0) = 0`, sampled on a grid
/// and interpolated linearly; beyond the last node the last slope is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionTable {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

impl FunctionTable {
    pub fn new(t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let fail = |m: &str| Err(QhError::Validation(m.to_string()));
        if t.len() != values.len() || t.len() < 2 {
            return fail("a function table needs at least two (t, value) pairs of equal length");
        }
        if t[0] != 0.0 || values[0] != 0.0 {
            return fail("a control function table must start at (0, 0)");
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return fail("table abscissae must be strictly increasing");
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[1] < w[0]) {
            return fail("table values must be finite and nondecreasing");
        }
        Ok(FunctionTable { t, values })
    }

    pub fn from_fn(grid: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid.to_vec(), grid.iter().map(|&t| f(t)).collect())
    }

    /// Identity on the given grid.
    pub fn identity(grid: &[f64]) -> Result<Self> {
        Self::from_fn(grid, |t| t)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        let i = match self.t.partition_point(|&t| t <= x) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        if x == t0 {
            return v0;
        }
        v0 + (v1 - v0) * (x - t0) / (t1 - t0)
    }

    /// Smallest `t` in the tabulated range with `φ(t) >= y`.
    pub fn inverse(&self, y: f64) -> Option<f64> {
        let i = self.values.iter().position(|&v| v >= y)?;
        if i == 0 {
            return Some(0.0);
        }
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        Some(t0 + (t1 - t0) * (y - v0) / (v1 - v0))
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }
}

/// `φ2 ∘ φ1` tabulated on the grid of `φ1`.
pub fn compose_semisolid(phi1: &FunctionTable, phi2: &FunctionTable) -> Result<FunctionTable> {
    for (name, phi) in [("φ1", phi1), ("φ2", phi2)] {
        FunctionTable::new(phi.t.clone(), phi.values.clone())
            .map_err(|e| QhError::Validation(format!("{name}: {e}")))?;
    }
    FunctionTable::new(
        phi1.t.clone(),
        phi1.values.iter().map(|&v| phi2.eval(v)).collect(),
    )
}

/// Every closed-form constant for given `(H, q, c, c')`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantSet {
    pub c: f64,
    pub cprime: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub q: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k0: f64,
    #[serde(rename = "thetaM")]
    pub theta_m: Option<f64>,
    #[serde(rename = "H_relative")]
    pub h_relative: Option<f64>,
    pub qprime: f64,
    pub c0: f64,
    pub q_length: f64,
    pub t0: f64,
    pub t1: f64,
    #[serde(rename = "K0")]
    pub k0_tv: f64,
    pub alpha_exp: f64,
    pub t0_semisolid: Option<f64>,
    #[serde(rename = "K1")]
    pub k1: Option<f64>,
    #[serde(rename = "K2")]
    pub k2: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
}

/// Ring constants, then `θ` and `t0`, then `t1`, plus the constants that
/// need no control function.
pub fn chain_constants(h: f64, q: f64, c: f64, cprime: f64) -> Result<ConstantSet> {
    let (m, alpha, beta) = ring_constants(h, c, q)?;
    check_c("c'", cprime)?;
    let theta = RingTheta::new(c, cprime, m, alpha, beta)?;
    Ok(ConstantSet {
        c,
        cprime,
        h,
        q,
        m,
        alpha,
        beta,
        k0: k0(c)?,
        theta_m: None,
        h_relative: None,
        qprime: qprime(c)?,
        c0: c0(),
        q_length: q_length(c)?,
        t0: theta.t0(),
        t1: theta.t1(),
        k0_tv: 1.0,
        alpha_exp: 1.0,
        t0_semisolid: None,
        k1: None,
        k2: None,
        k: None,
    })
}

impl ConstantSet {
    pub fn ring_theta(&self) -> RingTheta {
        RingTheta {
            c: self.c,
            cprime: self.cprime,
            m: self.m,
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    /// Overrides the two inputs with no closed form.
    pub fn with_tv_constants(mut self, k0_tv: f64, alpha_exp: f64) -> Result<Self> {
        require(k0_tv >= 1.0, || format!("K0 must be >= 1, got {k0_tv}"))?;
        require(alpha_exp > 0.0 && alpha_exp <= 1.0, || {
            format!("alpha_exp must lie in (0, 1], got {alpha_exp}")
        })?;
        self.k0_tv = k0_tv;
        self.alpha_exp = alpha_exp;
        Ok(self)
    }

    /// Fills the fields that depend on a semisolidity control function `φ`:
    /// `θ(2c/(1+2c))` and `H = k0 θ^{k0}` through `θ = ψ∘φ∘θ0`, and
    /// `t0 = min{φ^{-1}(1/(3c')), q/(2+c)^4}` with `(K1, K2, K)`, where `q`
    /// is the length-metric locality.
    pub fn with_phi(mut self, phi: &FunctionTable) -> Result<Self> {
        let knot = 2.0 * self.c / (1.0 + 2.0 * self.c);
        let theta_m = theta_from_semisolid(knot, self.c, |s| phi.eval(s))?;
        self.theta_m = Some(theta_m);
        self.h_relative = Some(h_from_theta(self.k0, theta_m)?);
        let target = 1.0 / (3.0 * self.cprime);
        let inv = phi.inverse(target).ok_or_else(|| {
            QhError::Domain(format!("φ never reaches 1/(3c') = {target} on its table"))
        })?;
        let t0 = inv.min(self.q_length / (2.0 + self.c).powi(4));
        let (k1, k2, k) = semisolid_exponents(
            phi.eval(t0),
            t0,
            self.k0_tv,
            self.alpha_exp,
            self.c,
            self.cprime,
            self.q_length,
        )?;
        self.t0_semisolid = Some(t0);
        self.k1 = Some(k1);
        self.k2 = Some(k2);
        self.k = Some(k);
        Ok(self)
    }

    /// `(key, value)` pairs in display order; unset fields are omitted.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("c", self.c),
            ("cprime", self.cprime),
            ("H", self.h),
            ("q", self.q),
            ("M", self.m),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("k0", self.k0),
            ("qprime", self.qprime),
            ("c0", self.c0),
            ("q_length", self.q_length),
            ("t0", self.t0),
            ("t1", self.t1),
            ("K0", self.k0_tv),
            ("alpha_exp", self.alpha_exp),
        ];
        for (k, v) in [
            ("thetaM", self.theta_m),
            ("H_relative", self.h_relative),
            ("t0_semisolid", self.t0_semisolid),
            ("K1", self.k1),
            ("K2", self.k2),
            ("K", self.k),
        ] {
            if let Some(v) = v {
                out.push((k, v));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_values() {
        assert_eq!(ring_constants(1.0, 1.0, 0.5).unwrap(), (4.0, 3.0, 12.0));
        assert_eq!(ring_constants(2.0, 1.0, 0.5).unwrap().0, 24.0);
        assert!((ring_constants(1.0, 1.0, 1.0 - 1e-15).unwrap().2 - 6.0).abs() < 1e-12);
        assert!(ring_constants(0.5, 1.0, 0.5).is_err());
        assert!(ring_constants(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn theta_hits_32() {
        let r = RingTheta::new(1.0, 1.0, 4.0, 3.0, 12.0).unwrap();
        assert_eq!(r.scale(), 5184.0);
        assert_eq!(r.theta(1.0 / 31104.0).unwrap(), 32.0);
        assert!(r.theta(r.t0()).is_err());
        assert_eq!(r.theta(0.0).unwrap(), 0.0);
    }

    #[test]
    fn theta_inverse_round_trip() {
        let r = RingTheta::new(1.0, 1.0, 4.0, 3.0, 12.0).unwrap();
        for s in [0.5, 3.0, 32.0, 100.0] {
            let t = r.theta_inverse(s).unwrap();
            assert!((r.theta(t).unwrap() - s).abs() <= 1e-12 * s);
        }
        assert!(r.t1() < r.t0() / 2.0);
        assert!(r.t1() > 0.0);
        assert!((r.psi(r.t1()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theta0_values() {
        assert_eq!(theta0_relative(0.0, 1.0).unwrap(), 0.0);
        assert!((theta0_relative(1.0 / 3.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(theta0_relative(0.5, 1.0).unwrap(), 3.0);
        assert!(theta0_relative(1.0, 1.0).is_err());
    }

    #[test]
    fn eta_prime_knots() {
        let theta = |t: f64| t / (1.0 - t);
        for (c, h) in [(1.0, 1.0), (1.0, 2.0), (2.5, 1.3)] {
            let knot = 2.0 * c / (1.0 + 2.0 * c);
            let left = eta_prime(knot, c, h, theta).unwrap();
            let (a, b) = eta_line(c, h);
            assert!((left - (a * knot + b)).abs() <= 1e-12 * left);
            assert!((left - h).abs() <= 1e-12 * h);
            let mid = a + b;
            let right = eta_prime(1.0 + 1e-300, c, h, theta).unwrap();
            assert!((mid - right).abs() <= 1e-12 * mid);
        }
        assert_eq!(eta_prime(0.0, 1.0, 2.0, theta).unwrap(), 0.0);
    }

    #[test]
    fn chain_defaults() {
        let s = chain_constants(1.0, 0.5, 1.0, 1.0).unwrap();
        assert_eq!((s.m, s.alpha, s.beta), (4.0, 3.0, 12.0));
        assert_eq!(s.t0, 1.0 / 5184.0);
        assert!((s.k0 - 2.70951).abs() < 1e-5);
        assert!((s.qprime - 1.0 / 27.0).abs() < 1e-15);
        assert!((s.q_length - 0.026221).abs() < 1e-6);
    }

    #[test]
    fn exponents() {
        let (k1, k2, k) = semisolid_exponents(0.01, 0.01, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((k1 - 27.0).abs() < 1e-12);
        assert_eq!(k2, 2.0);
        assert_eq!(k, k1);
        assert!(semisolid_exponents(1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn table_composition() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let a = FunctionTable::from_fn(&grid, |t| 3f64.sqrt() * t).unwrap();
        let b = FunctionTable::from_fn(&grid, |t| 2.0 * t).unwrap();
        let ab = compose_semisolid(&a, &b).unwrap();
        for (t, v) in ab.t.iter().zip(&ab.values) {
            assert!((v - 2.0 * 3f64.sqrt() * t).abs() < 1e-12);
        }
        let phi = FunctionTable::from_fn(&grid, |t| 2.0 * t.sqrt().max(t)).unwrap();
        let id = FunctionTable::identity(&grid).unwrap();
        let same = compose_semisolid(&phi, &id).unwrap();
        for (u, v) in same.values.iter().zip(&phi.values) {
            assert!((u - v).abs() <= 1e-12 * v.max(1.0));
        }
        let bad = FunctionTable {
            t: vec![0.0, 1.0, 2.0],
            values: vec![0.0, 2.0, 1.0],
        };
        assert!(matches!(
            compose_semisolid(&bad, &id),
            Err(QhError::Validation(_))
        ));
    }

    #[test]
    fn phi_pipeline_fills_optional_fields() {
        let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.01).collect();
        let phi = FunctionTable::from_fn(&grid, |t| 3f64.sqrt() * t).unwrap();
        let s = chain_constants(1.0, 0.5, 1.0, 1.0)
            .unwrap()
            .with_phi(&phi)
            .unwrap();
        let t0 = s.t0_semisolid.unwrap();
        assert!((t0 - s.q_length / 81.0).abs() < 1e-15);
        assert!((s.k2.unwrap() - 2.0 * 3f64.sqrt()).abs() < 1e-9);
        assert_eq!(s.k.unwrap(), s.k1.unwrap().max(s.k2.unwrap()));
        let theta_m = s.theta_m.unwrap();
        // θ0(2/3) = 5, φ(5) = 5√3
        assert!((theta_m - (5.0 * 3f64.sqrt()).exp_m1()).abs() <= 1e-9 * theta_m);
    }
}
