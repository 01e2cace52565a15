//! The Sibuya distribution `Sib(gamma)` on `{1, 2, ...}`:
//! `f(k) = gamma/k! prod_{j<k} (j - gamma)`, pgf `1 - (1 - z)^gamma`.
//!
//! For `gamma < 1` the tail is a power law, `f(k) ~ C k^{-1-gamma}`, and the
//! mean is infinite. The survival function has the product form
//! `P(D > k) = prod_{j<=k} (1 - gamma/j)`, which is what the sampler inverts.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::BipartiteSpec;
use crate::rng::RandomStream;

/// `2 x / (1 + sqrt(1 - x))`, i.e. `2 (1 - sqrt(1 - x))` without cancellation.
fn two_one_minus_sqrt(x: f64) -> f64 {
    2.0 * x / (1.0 + libm::sqrt(1.0 - x))
}

/// `gamma_m = 2 (1 - sqrt(1 - 1/(2m)))`, the limiting Sibuya parameter for a
/// small group of size `m`.
pub fn gamma_from_m(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1"));
    }
    Ok(two_one_minus_sqrt(0.5 / m as f64))
}

/// `gamma_{n,m} = 2 (1 - sqrt(1 - 1/(2n) - 1/(2m)))`.
pub fn gamma_from_nm(n: usize, m: usize) -> Result<f64> {
    let spec = BipartiteSpec::new(n, m)?;
    Ok(two_one_minus_sqrt(0.5 / spec.n() as f64 + 0.5 / spec.m() as f64))
}

/// Where the sampler switches from the running product to the asymptotic
/// Gamma-ratio expansion.
const PRODUCT_LIMIT: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sibuya {
    gamma: f64,
}

impl Sibuya {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 0.0 && gamma <= 1.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::Domain("Sibuya parameter must lie in (0, 1]"))
        }
    }

    /// Limit law of the dissenter count for a small group of size `m`.
    pub fn for_small_group(m: usize) -> Result<Self> {
        Self::new(gamma_from_m(m)?)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `ln(1 - gamma/j)`.
    fn log_factor(&self, j: u64) -> f64 {
        libm::log1p(-self.gamma / j as f64)
    }

    /// `ln P(D > k) = sum_{j<=k} ln(1 - gamma/j)`, by direct summation.
    pub fn log_survival(&self, k: u64) -> f64 {
        (1..=k).map(|j| self.log_factor(j)).sum()
    }

    /// `P(D > k)`.
    pub fn survival(&self, k: u64) -> f64 {
        libm::exp(self.log_survival(k))
    }

    /// Log-space pmf: `ln gamma + sum_{j<k} ln(1 - gamma/j) - ln k`.
    pub fn pmf(&self, k: u64) -> f64 {
        assert!(k >= 1, "Sibuya support starts at 1");
        if k == 1 {
            return self.gamma;
        }
        libm::exp(libm::log(self.gamma) + self.log_survival(k - 1) - libm::log(k as f64))
    }

    pub fn try_pmf(&self, k: u64) -> Result<f64> {
        if k == 0 {
            Err(Error::Domain("Sibuya pmf is defined for k >= 1"))
        } else {
            Ok(self.pmf(k))
        }
    }

    /// Literal product form `gamma/k! prod_{j<k} (j - gamma)`; only for
    /// small `k`, where it serves as a cross-check.
    pub fn pmf_product(&self, k: u64) -> f64 {
        assert!((1..=30).contains(&k), "product form is for 1 <= k <= 30");
        let mut p = self.gamma;
        for j in 1..k {
            p *= j as f64 - self.gamma;
        }
        (1..=k).fold(p, |acc, j| acc / j as f64)
    }

    /// `1 - (1 - z)^gamma` for `|z| <= 1`.
    pub fn pgf(&self, z: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&z) {
            return Err(Error::Domain("pgf argument must satisfy |z| <= 1"));
        }
        Ok(1.0 - libm::pow(1.0 - z, self.gamma))
    }

    /// `sin(gamma pi) Gamma(1 + gamma) / pi`, the constant in
    /// `f(k) ~ C k^{-1-gamma}`; undefined at `gamma = 1`.
    pub fn tail_constant(&self) -> Result<f64> {
        if self.gamma >= 1.0 {
            return Err(Error::Domain("no power-law tail at gamma = 1"));
        }
        Ok(libm::sin(self.gamma * PI) * libm::tgamma(1.0 + self.gamma) / PI)
    }

    /// `ln Gamma(x + 1 - gamma) - ln Gamma(x + 1)` from the Stirling series,
    /// arranged so the large terms cancel analytically. Accurate for x >= 60.
    fn log_gamma_ratio(&self, x: f64) -> f64 {
        let g = self.gamma;
        let z2 = x + 1.0;
        let z1 = z2 - g;
        let inv = |z: f64, p: i32| libm::pow(z, -p as f64);
        -g * libm::log(z2) + (z1 - 0.5) * libm::log1p(-g / z2)
            + g
            + (inv(z1, 1) - inv(z2, 1)) / 12.0
            - (inv(z1, 3) - inv(z2, 3)) / 360.0
            + (inv(z1, 5) - inv(z2, 5)) / 1260.0
    }

    /// Draws `D ~ Sib(gamma)` exactly, up to `u64` saturation.
    ///
    /// Equivalent in law to running Bernoulli(`gamma/k`) trials for
    /// `k = 1, 2, ...` and returning the first success, but uses a single
    /// uniform `U` and returns the least `k` with `P(D > k) < U`. Up to
    /// `k = 64` the survival product is accumulated directly; beyond that
    /// the Gamma-ratio form is inverted numerically. Draws past `u64::MAX`
    /// (probability about `2^{-64 gamma}`) saturate.
    pub fn sample(&self, rng: &mut RandomStream) -> u64 {
        let u = rng.open_unit();
        let mut surv = 1.0;
        let mut log_surv = 0.0;
        for k in 1..=PRODUCT_LIMIT {
            surv *= 1.0 - self.gamma / k as f64;
            log_surv += self.log_factor(k);
            if u > surv {
                return k;
            }
        }
        let target = libm::log(u);
        let anchor = self.log_gamma_ratio(PRODUCT_LIMIT as f64);
        let log_s = |x: f64| log_surv + self.log_gamma_ratio(x) - anchor;
        // Newton on the continuous extension, with derivative ~ -gamma/(x+1).
        let k0 = PRODUCT_LIMIT as f64;
        let mut x = k0 * libm::exp((log_surv - target) / self.gamma);
        for _ in 0..60 {
            if !x.is_finite() || x > 1.9e19 {
                return u64::MAX;
            }
            x = x.max(k0);
            let step = (log_s(x) - target) * (x + 1.0 - 0.5 * self.gamma) / self.gamma;
            x += step;
            if step.abs() <= 1e-10 * x {
                break;
            }
        }
        if !x.is_finite() || x >= 1.8e19 {
            return u64::MAX;
        }
        let mut k = (libm::ceil(x) as u64).max(PRODUCT_LIMIT + 1);
        while log_s(k as f64) >= target {
            k += 1;
        }
        while k > PRODUCT_LIMIT + 1 && log_s((k - 1) as f64) < target {
            k -= 1;
        }
        k
    }
}

/// Incrementally extended table of the cumulative log-survival sums.
/// Not shared: use one table per worker.
#[derive(Debug, Clone)]
pub struct PmfTable {
    law: Sibuya,
    log_survival: Vec<f64>,
}

impl PmfTable {
    pub fn new(law: Sibuya) -> Self {
        Self {
            law,
            log_survival: alloc::vec![0.0],
        }
    }

    fn extend_to(&mut self, k: u64) {
        while (self.log_survival.len() as u64) <= k {
            let j = self.log_survival.len() as u64;
            let last = *self.log_survival.last().unwrap();
            self.log_survival.push(last + self.law.log_factor(j));
        }
    }

    pub fn survival(&mut self, k: u64) -> f64 {
        self.extend_to(k);
        libm::exp(self.log_survival[k as usize])
    }

    pub fn pmf(&mut self, k: u64) -> f64 {
        assert!(k >= 1, "Sibuya support starts at 1");
        if k == 1 {
            return self.law.gamma;
        }
        self.extend_to(k - 1);
        libm::exp(
            libm::log(self.law.gamma) + self.log_survival[k as usize - 1] - libm::log(k as f64),
        )
    }
}
