//! Special-function kernels: log-gamma, terminating Gauss hypergeometric
//! sums, associated Legendre (Ferrers) values in log-domain, Hermite
//! polynomials and functions, and Gauss–Hermite quadrature tables.
//!
//! Everything probability-bearing stays in log-domain until the last moment;
//! transition tables routinely span hundreds of orders of magnitude.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// A nonzero complex value stored as (log|z|, arg z).
///
/// Multiplication adds both fields; the phase is kept in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_modulus: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { log_modulus: f64::NEG_INFINITY, phase: 0.0 };

    pub fn new(log_modulus: f64, phase: f64) -> Self {
        Self { log_modulus, phase: normalize_phase(phase) }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self { log_modulus: z.norm().ln(), phase: z.arg() }
    }

    /// Real value as sign · e^{log}; phase 0 or π.
    pub fn from_sign_log(sign: f64, log_modulus: f64) -> Self {
        let phase = if sign < 0.0 { std::f64::consts::PI } else { 0.0 };
        Self { log_modulus, phase }
    }

    pub fn is_zero(&self) -> bool {
        self.log_modulus == f64::NEG_INFINITY
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_modulus.exp(), self.phase)
    }

    pub fn mul(self, other: Self) -> Self {
        Self::new(self.log_modulus + other.log_modulus, self.phase + other.phase)
    }

    pub fn scale_log(self, dlog: f64) -> Self {
        Self { log_modulus: self.log_modulus + dlog, phase: self.phase }
    }

    pub fn rotate(self, dphase: f64) -> Self {
        Self::new(self.log_modulus, self.phase + dphase)
    }

    /// Real part sign for values known to be real (phase 0 or π).
    pub fn real_sign(&self) -> f64 {
        if self.phase.abs() > std::f64::consts::FRAC_PI_2 {
            -1.0
        } else {
            1.0
        }
    }
}

pub fn normalize_phase(phase: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    if phase.is_nan() {
        return phase;
    }
    let mut p = phase % TAU;
    if p <= -PI {
        p += TAU;
    } else if p > PI {
        p -= TAU;
    }
    p
}

// Lanczos approximation, g = 7, 9 terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0, accurate to ~1e-13 relative.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        // recurrence keeps the Lanczos argument away from the pole
        return Ok(log_gamma(x + 1.0)? - x.ln());
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln())
}

/// ln n! via the gamma function.
pub fn log_factorial(n: usize) -> f64 {
    log_gamma(n as f64 + 1.0).expect("n! is always in domain")
}

fn near_nonpositive_integer(z: Complex64) -> Option<usize> {
    if z.im.abs() > 1e-9 {
        return None;
    }
    let r = z.re.round();
    if r <= 0.0 && (z.re - r).abs() <= 1e-9 {
        Some((-r) as usize)
    } else {
        None
    }
}

/// Terminating Gauss hypergeometric sum F(a, b; c; z) with real z.
///
/// Requires a or b to be a nonpositive integer (within 1e-9); the finite sum
/// is accumulated with Neumaier compensation and dynamic rescaling so the
/// result is returned in log form.
pub fn hyp2f1_terminating(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: f64,
) -> Result<LogComplex> {
    let ka = near_nonpositive_integer(a);
    let kb = near_nonpositive_integer(b);
    let k_max = match (ka, kb) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) => x,
        (None, Some(y)) => y,
        (None, None) => {
            return Err(Error::UnsupportedParameter(format!(
                "hyp2f1_terminating: neither a = {a} nor b = {b} is a nonpositive integer"
            )))
        }
    };
    if let Some(j) = near_nonpositive_integer(c) {
        if j + 1 <= k_max {
            return Err(Error::Pole { c: c.re });
        }
    }

    // Neumaier-compensated complex accumulation with overflow rescaling.
    let mut sum = Complex64::new(1.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut log_offset = 0.0f64;
    const RESCALE_ABOVE: f64 = 1e280;
    const RESCALE_BY: f64 = 1e-280;

    let add = |sum: &mut Complex64, comp: &mut Complex64, t: Complex64| {
        // componentwise Neumaier
        let s_re = sum.re + t.re;
        comp.re += if sum.re.abs() >= t.re.abs() { (sum.re - s_re) + t.re } else { (t.re - s_re) + sum.re };
        sum.re = s_re;
        let s_im = sum.im + t.im;
        comp.im += if sum.im.abs() >= t.im.abs() { (sum.im - s_im) + t.im } else { (t.im - s_im) + sum.im };
        sum.im = s_im;
    };

    for k in 0..k_max {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) * z / ((c + kf) * (kf + 1.0));
        add(&mut sum, &mut comp, term);
        if term.norm_sqr() > RESCALE_ABOVE * RESCALE_ABOVE {
            sum *= RESCALE_BY;
            comp *= RESCALE_BY;
            term *= RESCALE_BY;
            log_offset -= RESCALE_BY.ln();
        }
    }
    let total = sum + comp;
    if total == Complex64::new(0.0, 0.0) {
        return Ok(LogComplex::ZERO);
    }
    Ok(LogComplex::from_complex(total).scale_log(log_offset))
}

/// Ferrers function P^{(N−M)/2}_{(N+M)/2}(x) at x = 1/|α| ∈ (0, 1], in log
/// form with sign, via the terminating hypergeometric representation.
///
/// For M < N the order-reflection identity
/// P_ν^{m} = (−1)^m (Γ(ν−m+1)/Γ(ν+m+1)) P_ν^{−m} folds both orderings onto a
/// single code path.
pub fn legendre_ratio_form(n: usize, m: usize, inv_alpha_mod: f64) -> Result<LogComplex> {
    if !(inv_alpha_mod > 0.0 && inv_alpha_mod <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "legendre_ratio_form requires 1/|alpha| in (0, 1], got {inv_alpha_mod}"
        )));
    }
    let x = inv_alpha_mod.min(1.0);
    // |β|² = |α|² − 1; cancellation-prone near x = 1, acceptable for the
    // spec-signature entry point — callers holding the exact β use
    // `legendre_from_alpha_beta` directly
    legendre_from_alpha_beta(n, m, -x.ln(), (1.0 - x * x) / (x * x))
}

/// Same value from exact ln|α| and |β|², avoiding the 1 − x² cancellation.
pub fn legendre_from_alpha_beta(
    n: usize,
    m: usize,
    log_alpha: f64,
    beta_sq: f64,
) -> Result<LogComplex> {
    if (n + m) % 2 != 0 {
        return Err(Error::Parity { n, m });
    }

    let (small, big) = (n.min(m), n.max(m));
    let half_diff = (big - small) / 2;

    if beta_sq == 0.0 {
        // no squeezing: P^0_ν(1) = 1, off-order values vanish
        return Ok(if half_diff == 0 { LogComplex::new(0.0, 0.0) } else { LogComplex::ZERO });
    }
    let log_beta = 0.5 * beta_sq.ln();

    // F(−s/2, (1−s)/2; 1+half_diff; −|β|²) where s is the smaller index
    let f = hyp2f1_terminating(
        Complex64::new(-(small as f64) / 2.0, 0.0),
        Complex64::new((1.0 - small as f64) / 2.0, 0.0),
        Complex64::new(1.0 + half_diff as f64, 0.0),
        -beta_sq,
    )?;
    if f.is_zero() {
        return Ok(LogComplex::ZERO);
    }

    let shared = half_diff as f64 * (log_beta - std::f64::consts::LN_2 - log_alpha)
        - log_factorial(half_diff)
        - small as f64 * log_alpha;
    let value = if m >= n {
        // negative order: carries (−1)^{(M−N)/2}
        let sign_phase = if half_diff % 2 == 1 { std::f64::consts::PI } else { 0.0 };
        f.scale_log(shared).rotate(sign_phase)
    } else {
        // positive order: reflection absorbs the sign, adds N!/M!
        f.scale_log(shared + log_factorial(n) - log_factorial(m))
    };
    Ok(value)
}

/// Hermite polynomial H_n(x) by the three-term recurrence.
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    let (sign, log) = hermite_poly_scaled(n, x);
    if log == f64::NEG_INFINITY {
        0.0
    } else {
        sign * log.exp()
    }
}

/// (sign, ln|H_n(x)|); carries a running log factor so large orders do not
/// overflow.
pub fn hermite_poly_scaled(n: usize, x: f64) -> (f64, f64) {
    let mut log_offset = 0.0f64;
    let mut prev = 0.0f64; // H_{-1}
    let mut cur = 1.0f64; // H_0
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e250 {
            let scale = 1e-250;
            prev *= scale;
            cur *= scale;
            log_offset -= scale.ln();
        }
    }
    if cur == 0.0 {
        (1.0, f64::NEG_INFINITY)
    } else {
        (cur.signum(), cur.abs().ln() + log_offset)
    }
}

/// Hermite functions φ_k(y) = H_k(y) e^{−y²/2} / √(2^k k! √π) for k = 0..=n.
///
/// Bounded for all arguments, so products of high orders stay finite where
/// the bare polynomials would overflow.
pub fn hermite_functions(n: usize, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * y * y).exp();
    out.push(phi0);
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * y * phi0);
    for k in 1..n {
        let kf = k as f64;
        let next = y * (2.0 / (kf + 1.0)).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Gauss–Hermite rule: nodes of H_n plus both the classical weights w_i and
/// the exp-scaled weights w̃_i = e^{x_i²} w_i used for integrands written
/// with their own Gaussian.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub weights_scaled: Vec<f64>,
}

fn gh_compute(n: usize) -> GaussHermite {
    assert!(n >= 1, "quadrature order must be positive");
    // orthonormal Hermite value and derivative at x
    let eval = |x: f64| -> (f64, f64) {
        let mut prev = 0.0f64;
        let mut cur = std::f64::consts::PI.powf(-0.25);
        for k in 0..n {
            let kf = k as f64;
            let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        let deriv = (2.0 * n as f64).sqrt() * prev;
        (cur, deriv)
    };

    // Golub–Welsch: nodes are the eigenvalues of the Jacobi matrix with
    // zero diagonal and off-diagonal √(k/2); Newton-polish afterwards
    let mut jacobi = nalgebra::DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = eval(*x);
            let dx = p / dp;
            *x -= dx;
            if dx.abs() < 1e-15 * x.abs().max(1.0) {
                break;
            }
        }
    }
    // enforce exact symmetry
    for i in 0..n / 2 {
        let s = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[n - 1 - i] = s;
        nodes[i] = -s;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let mut weights = vec![0.0; n];
    let mut weights_scaled = vec![0.0; n];
    for i in 0..n {
        let x = nodes[i];
        // orthonormal H_{n-1} at the node
        let mut prev = 0.0f64;
        let mut cur = std::f64::consts::PI.powf(-0.25);
        for k in 0..n - 1 {
            let kf = k as f64;
            let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        let h = cur; // orthonormal H_{n-1}(x_i)
        // w_i = 1/(n H̃_{n-1}²); w̃_i = e^{x²} w_i = 1/(n φ_{n-1}²)
        weights[i] = 1.0 / (n as f64 * h * h);
        let phi = h * (-0.5 * x * x).exp();
        weights_scaled[i] = 1.0 / (n as f64 * phi * phi);
    }
    GaussHermite { nodes, weights, weights_scaled }
}

/// Cached Gauss–Hermite table of order n (computed once, immutable after).
pub fn gauss_hermite(n: usize) -> Arc<GaussHermite> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n).or_insert_with(|| Arc::new(gh_compute(n))).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn log_gamma_small_integers() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert_relative_eq!(log_gamma(5.0).unwrap(), 24.0_f64.ln(), max_relative = 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-3.0).is_err());
    }

    #[test]
    fn log_gamma_matches_cumulative_sum() {
        // oracle: ln 100! = Σ ln k
        let direct: f64 = (1..=100).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(log_gamma(101.0).unwrap(), direct, max_relative = 1e-12);
    }

    #[test]
    fn hyp2f1_empty_and_one_term() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let f = hyp2f1_terminating(c(0.0), c(2.0), c(3.0), 0.5).unwrap();
        assert_relative_eq!(f.to_complex().re, 1.0, max_relative = 1e-15);
        let f = hyp2f1_terminating(c(-1.0), c(2.0), c(3.0), 0.5).unwrap();
        assert_relative_eq!(f.to_complex().re, 2.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn hyp2f1_frozen_rational_value() {
        // F(-3, -2.5; 4; 0.7) = 165983/64000 exactly (term-by-term rational sum)
        let c = |x: f64| Complex64::new(x, 0.0);
        let f = hyp2f1_terminating(c(-3.0), c(-2.5), c(4.0), 0.7).unwrap();
        assert_relative_eq!(f.to_complex().re, 165_983.0 / 64_000.0, max_relative = 1e-13);
    }

    #[test]
    fn hyp2f1_rejects_nonterminating_and_poles() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert!(matches!(
            hyp2f1_terminating(c(0.5), c(2.0), c(3.0), 0.5),
            Err(Error::UnsupportedParameter(_))
        ));
        assert!(matches!(
            hyp2f1_terminating(c(-3.0), c(2.0), c(-1.0), 0.5),
            Err(Error::Pole { .. })
        ));
        // pole index beyond termination is harmless
        assert!(hyp2f1_terminating(c(-1.0), c(2.0), c(-5.0), 0.5).is_ok());
    }

    proptest! {
        #[test]
        fn hyp2f1_symmetric_in_a_b(n in 0usize..6, b in -4.0f64..4.0, z in -2.0f64..0.99) {
            let a = Complex64::new(-(n as f64), 0.0);
            let bb = Complex64::new(b, 0.0);
            let c = Complex64::new(4.3, 0.0);
            let f1 = hyp2f1_terminating(a, bb, c, z).unwrap().to_complex();
            let f2 = hyp2f1_terminating(bb, a, c, z).unwrap().to_complex();
            prop_assert!((f1 - f2).norm() <= 1e-12 * f1.norm().max(1e-12));
        }
    }

    #[test]
    fn legendre_parity_error_and_no_squeeze() {
        assert!(matches!(legendre_ratio_form(0, 3, 0.8), Err(Error::Parity { .. })));
        // β = 0: δ_MN after assembly
        let same = legendre_ratio_form(4, 4, 1.0).unwrap();
        assert_relative_eq!(same.to_complex().re, 1.0, max_relative = 1e-14);
        assert!(legendre_ratio_form(0, 2, 1.0).unwrap().is_zero());
    }

    #[test]
    fn legendre_squeezed_vacuum_value() {
        // N=0, M=2, |α| = cosh 0.5: assembled P₂ = ½ tanh²(0.5)/cosh(0.5)
        let r = 0.5f64;
        let alpha = r.cosh();
        let p = legendre_ratio_form(0, 2, 1.0 / alpha).unwrap();
        let assembled =
            (log_factorial(2) - log_factorial(0) - alpha.ln() + 2.0 * p.log_modulus).exp();
        let expect = 0.5 * r.tanh().powi(2) / r.cosh();
        assert_relative_eq!(assembled, expect, max_relative = 1e-12);
        assert_relative_eq!(expect, 0.094_691_09, max_relative = 1e-6);
    }

    #[test]
    fn legendre_degree_recurrence() {
        // (2ν+1) x P_ν^μ = (ν−μ+1) P_{ν+1}^μ + (ν+μ) P_{ν−1}^μ on admissible
        // triples: ν = (N+M)/2, μ = (N−M)/2; stepping ν by 1 keeps μ fixed by
        // moving (N, M) ↦ (N+1, M+1).
        let xs = [0.35, 0.6, 0.92];
        let cases = [(0usize, 2usize), (1, 3), (2, 6), (5, 9), (8, 40), (13, 7), (20, 4)];
        for &x in &xs {
            for &(n, m) in &cases {
                let nu = (n + m) as f64 / 2.0;
                let mu = (n as f64 - m as f64) / 2.0;
                let p = legendre_ratio_form(n, m, x).unwrap().to_complex().re;
                let p_up = legendre_ratio_form(n + 1, m + 1, x).unwrap().to_complex().re;
                if n == 0 || m == 0 {
                    continue;
                }
                let p_dn = legendre_ratio_form(n - 1, m - 1, x).unwrap().to_complex().re;
                let lhs = (2.0 * nu + 1.0) * x * p;
                let rhs = (nu - mu + 1.0) * p_up + (nu + mu) * p_dn;
                let scale = lhs.abs().max(rhs.abs()).max(1e-300);
                assert!(
                    ((lhs - rhs) / scale).abs() < 1e-9,
                    "recurrence failed at x={x}, (N,M)=({n},{m}): {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn legendre_order_reflection_consistency() {
        // same value through the M≥N and M<N code paths:
        // P^{-m}_ν = (−1)^m (Γ(ν−m+1)/Γ(ν+m+1)) P^{+m}_ν
        for &(n, m) in &[(1usize, 5usize), (2, 8), (3, 11), (4, 40)] {
            let x = 0.55;
            let neg = legendre_ratio_form(n, m, x).unwrap();
            let pos = legendre_ratio_form(m, n, x).unwrap();
            let half = ((m - n) / 2) as f64;
            let ratio_log = log_factorial((n + m) / 2 - (m - n) / 2)
                - log_factorial((n + m) / 2 + (m - n) / 2);
            // ν−m'+1 … ν+m'+1 with ν=(n+m)/2, m'=(m−n)/2: Γ(n+1)/Γ(m+1)
            let expect_log = pos.log_modulus + ratio_log;
            assert_relative_eq!(neg.log_modulus, expect_log, max_relative = 1e-10);
            let sign_flip = (half as i64) % 2 == 1;
            let signs_match = (neg.real_sign() == pos.real_sign()) ^ sign_flip;
            assert!(signs_match, "sign mismatch for (N,M)=({n},{m})");
        }
    }

    #[test]
    fn hermite_base_cases_and_h4() {
        assert_eq!(hermite_poly(0, 1.23), 1.0);
        assert_relative_eq!(hermite_poly(1, 1.23), 2.46, max_relative = 1e-15);
        assert_relative_eq!(hermite_poly(4, 0.0), 12.0, max_relative = 1e-14);
    }

    #[test]
    fn hermite_h30_vs_exact_coefficients() {
        // oracle: integer coefficients from the recurrence, evaluated in i128
        let mut coeffs: Vec<Vec<i128>> = vec![vec![1], vec![0, 2]];
        for n in 1..30usize {
            let mut next = vec![0i128; n + 2];
            for (k, &c) in coeffs[n].iter().enumerate() {
                next[k + 1] += 2 * c;
            }
            for (k, &c) in coeffs[n - 1].iter().enumerate() {
                next[k] -= 2 * n as i128 * c;
            }
            coeffs.push(next);
        }
        let x: f64 = 1.7;
        let exact: f64 =
            coeffs[30].iter().enumerate().map(|(k, &c)| c as f64 * x.powi(k as i32)).sum();
        assert_relative_eq!(hermite_poly(30, 1.7), exact, max_relative = 1e-10);
        let (_, log) = hermite_poly_scaled(30, 1.7);
        assert_relative_eq!(log, exact.abs().ln(), max_relative = 1e-10);
    }

    #[test]
    fn hermite_scaled_handles_large_order() {
        let (sign, log) = hermite_poly_scaled(400, 3.0);
        assert!(log.is_finite() && log > 400.0);
        assert!(sign == 1.0 || sign == -1.0);
    }

    #[test]
    fn hermite_functions_match_polynomials() {
        let y = 1.3;
        let phis = hermite_functions(6, y);
        for k in 0..=6 {
            let norm = (2f64.powi(k as i32)
                * (log_factorial(k)).exp()
                * std::f64::consts::PI.sqrt())
            .sqrt();
            let expect = hermite_poly(k, y) * (-0.5 * y * y).exp() / norm;
            assert_relative_eq!(phis[k], expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn gauss_hermite_moments() {
        // ∫ x^{2k} e^{−x²} dx = Γ(k+½) exactly for 2k ≤ 2n−1
        for &n in &[5usize, 20, 64, 151, 512] {
            let gh = gauss_hermite(n);
            for k in 0..n.min(40) {
                let quad: f64 = gh
                    .nodes
                    .iter()
                    .zip(&gh.weights)
                    .map(|(&x, &w)| w * x.powi(2 * k as i32))
                    .sum();
                let exact = log_gamma(k as f64 + 0.5).unwrap().exp();
                assert_relative_eq!(quad, exact, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn gauss_hermite_scaled_weights() {
        let gh = gauss_hermite(40);
        for i in 0..40 {
            assert_relative_eq!(
                gh.weights_scaled[i],
                gh.weights[i] * (gh.nodes[i] * gh.nodes[i]).exp(),
                max_relative = 1e-11
            );
        }
    }
}
