//! Bessel functions of the first kind `J_nu(t)` for real `nu >= -1/2`, `t >= 0`.
//!
//! Three evaluation regimes:
//!
//! - `t <= 6`: the ascending power series.
//! - `6 < t < t_asym`: Miller's backward recurrence, normalized with the
//!   Neumann series `(t/2)^nu = sum_k (nu + 2k) Gamma(nu + k) / k! J_{nu+2k}(t)`.
//! - `t >= t_asym = max(25, 2 nu^2 + 20)`: the Hankel large-argument expansion
//!   `sqrt(2/(pi t)) (P cos w - Q sin w)`, `w = t - nu pi/2 - pi/4`, summed
//!   until the terms stop decreasing.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < -0.5 {
            return Err(Error::OrderOutOfRange(nu));
        }
        Ok(BesselOrder(nu))
    }

    /// Order `n/2 - 1` of the radial Fourier kernel in dimension `n`.
    pub fn for_dimension(n: u32) -> Self {
        BesselOrder(n as f64 / 2.0 - 1.0)
    }

    pub fn nu(self) -> f64 {
        self.0
    }

    /// `J_nu(t)`. Returns `+inf` for `nu < 0` at `t = 0`.
    pub fn eval(self, t: f64) -> f64 {
        let nu = self.0;
        if t == 0.0 {
            return if nu == 0.0 {
                1.0
            } else if nu > 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
        }
        if t <= SERIES_LIMIT {
            series(nu, t)
        } else if t < asymptotic_threshold(nu) {
            miller(nu, t)
        } else {
            hankel_asymptotic(nu, t)
        }
    }

    /// `dJ_nu/dt = (nu/t) J_nu - J_{nu+1}`.
    pub fn derivative(self, t: f64) -> f64 {
        let nu = self.0;
        nu / t * self.eval(t) - BesselOrder(nu + 1.0).eval(t)
    }
}

pub fn asymptotic_threshold(nu: f64) -> f64 {
    (2.0 * nu * nu + 20.0).max(25.0)
}

/// `J_nu(t)` with argument checking.
pub fn bessel_j(nu: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("Bessel argument {t} is negative")));
    }
    Ok(BesselOrder::new(nu)?.eval(t))
}

/// Ascending series `sum (-1)^k (t/2)^{2k+nu} / (k! Gamma(k+nu+1))`.
pub(crate) fn series(nu: f64, t: f64) -> f64 {
    let half = 0.5 * t;
    let mut term = half.powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    let q = -half * half;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(nu: f64, t: f64) -> f64 {
    // Start index well above t so the minimal solution dominates.
    let mut m = (t + 12.0 * t.cbrt() + 30.0).ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut y = vec![0.0; m + 2];
    y[m] = 1e-30;
    for k in (1..=m).rev() {
        let order = nu + k as f64;
        y[k - 1] = 2.0 * order / t * y[k] - y[k + 1];
        if y[k - 1].abs() > 1e250 {
            for v in &mut y[k - 1..] {
                *v *= 1e-250;
            }
        }
    }
    // Neumann normalization.
    let mut norm = gamma(nu + 1.0) * y[0];
    let mut d = gamma(nu + 1.0); // Gamma(nu + j) / j! at j = 1
    let mut j = 1usize;
    while 2 * j <= m {
        let c = (nu + 2.0 * j as f64) * d;
        norm += c * y[2 * j];
        d *= (nu + j as f64) / (j as f64 + 1.0);
        j += 1;
    }
    y[0] * (0.5 * t).powf(nu) / norm
}

fn hankel_asymptotic(nu: f64, t: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (k as f64 * 8.0 * t);
        if a == 0.0 {
            break;
        }
        if a.abs() >= prev {
            break;
        }
        prev = a.abs();
        // a_k enters P (k even) or Q (k odd) with sign (-1)^{floor(k/2)}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let phase = 0.5 * nu * PI + 0.25 * PI;
    let (sp, cp) = phase.sin_cos();
    let (st, ct) = t.sin_cos();
    let cos_w = ct * cp + st * sp;
    let sin_w = st * cp - ct * sp;
    (2.0 / (PI * t)).sqrt() * (p * cos_w - q * sin_w)
}

/// Ascending positive zeros of `J_nu`.
///
/// Readers of a built table may share it freely; extension needs `&mut`.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    order: BesselOrder,
    zeros: Vec<f64>,
}

impl ZeroTable {
    pub fn new(order: BesselOrder) -> Self {
        ZeroTable {
            order,
            zeros: Vec::new(),
        }
    }

    pub fn order(&self) -> BesselOrder {
        self.order
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// McMahon's leading-order estimate `(k + nu/2 - 1/4) pi` of the k-th zero.
    pub fn mcmahon_guess(&self, k: usize) -> f64 {
        (k as f64 + 0.5 * self.order.nu() - 0.25) * PI
    }

    pub fn extend_to(&mut self, k: usize) {
        while self.zeros.len() < k {
            let next = self.next_zero();
            self.zeros.push(next);
        }
    }

    fn next_zero(&self) -> f64 {
        let j = self.order;
        // Consecutive zeros are at least ~2.7 apart for nu >= -1/2 and
        // j_{nu,1} > nu, so a 0.25 scan from these floors cannot step over a
        // sign change.
        let mut lo = self.zeros.last().map_or(self.order.nu().max(0.25), |z| z + 1.0);
        let mut flo = j.eval(lo);
        let step = 0.25;
        let mut hi = lo + step;
        let mut fhi = j.eval(hi);
        while flo.signum() == fhi.signum() && fhi != 0.0 {
            lo = hi;
            flo = fhi;
            hi += step;
            fhi = j.eval(hi);
        }
        if fhi == 0.0 {
            return hi;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = j.eval(mid);
            if fm == 0.0 {
                return mid;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * hi {
                break;
            }
        }
        let x = 0.5 * (lo + hi);
        // One Newton polish, kept only if it improves the residual.
        let polished = x - j.eval(x) / j.derivative(x);
        if polished.is_finite() && j.eval(polished).abs() < j.eval(x).abs() {
            polished
        } else {
            x
        }
    }
}

/// The first `k` positive zeros of `J_nu`.
pub fn zeros(order: BesselOrder, k: usize) -> ZeroTable {
    let mut table = ZeroTable::new(order);
    table.extend_to(k);
    table
}

static ZERO_CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<f64>>>>> = OnceLock::new();

/// Process-wide cache of zero tables; returns at least `k` zeros.
pub fn cached_zeros(order: BesselOrder, k: usize) -> Arc<Vec<f64>> {
    let cache = ZERO_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = order.nu().to_bits();
    {
        let guard = cache.lock().expect("zero cache poisoned");
        if let Some(z) = guard.get(&key) {
            if z.len() >= k {
                return Arc::clone(z);
            }
        }
    }
    let existing = cache
        .lock()
        .expect("zero cache poisoned")
        .get(&key)
        .map(|z| z.as_ref().clone())
        .unwrap_or_default();
    let mut table = ZeroTable { order, zeros: existing };
    table.extend_to(k.max(64).next_power_of_two());
    let arc = Arc::new(table.zeros);
    let mut guard = cache.lock().expect("zero cache poisoned");
    let entry = guard.entry(key).or_insert_with(|| Arc::clone(&arc));
    if entry.len() < arc.len() {
        *entry = Arc::clone(&arc);
    }
    Arc::clone(entry)
}

/// Empirical constant `max_t |J_nu(t)| * max(t^{1/2}, t^{-nu})` over `grid`,
/// combining the large-argument decay `t^{-1/2}` and the small-argument
/// behavior `t^nu`.
pub fn check_growth_bounds(order: BesselOrder, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&t| order.eval(t).abs() * t.sqrt().max(t.powf(-order.nu())))
        .fold(0.0, f64::max)
}
