//! Coupled power evolution of WDM signals and backward Raman pumps over one
//! span.
//!
//! Every wave `i` obeys, in its own direction of travel,
//!
//! ```text
//! dP_i = P_i * ( -alpha_i + sum_{f_j > f_i} g(f_j - f_i) P_j
//!                         - sum_{f_j < f_i} (f_i / f_j) g(f_i - f_j) P_j )
//! ```
//!
//! Signals are launched at z = 0 and pumps are injected at z = L, which makes
//! this a two-point boundary value problem, solved by alternating a forward
//! signal sweep (pumps frozen) with a backward pump sweep (signals frozen) and
//! relaxing the pump profile between sweeps. Each sweep is fixed-step RK4.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::link::{ChannelGrid, FiberSpec};
use crate::units::{linear_to_db, wavelength_to_thz};

pub const PUMP_MAX_POWER_MW: f64 = 250.0;
/// Pump wavelength search window, nm.
pub const PUMP_WINDOW_NM: (f64, f64) = (1350.0, 1460.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanPump {
    pub wavelength_nm: f64,
    pub power_mw: f64,
}

impl RamanPump {
    pub fn new(wavelength_nm: f64, power_mw: f64) -> Self {
        Self {
            wavelength_nm,
            power_mw,
        }
    }

    pub fn frequency_thz(&self) -> f64 {
        wavelength_to_thz(self.wavelength_nm)
    }
}

/// Counter-propagating pumps injected at the span end.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RamanPumpSet {
    pumps: Vec<RamanPump>,
}

impl RamanPumpSet {
    pub fn new(pumps: Vec<RamanPump>) -> Result<Self> {
        for (row, p) in pumps.iter().enumerate() {
            if !(p.power_mw >= 0.0 && p.power_mw <= PUMP_MAX_POWER_MW) {
                return Err(Error::InvalidTable {
                    row,
                    reason: "pump power outside [0, 250] mW",
                });
            }
            let (lo, hi) = PUMP_WINDOW_NM;
            if !(p.wavelength_nm >= lo && p.wavelength_nm <= hi) {
                return Err(Error::InvalidTable {
                    row,
                    reason: "pump wavelength outside 1350-1460 nm",
                });
            }
        }
        Ok(Self { pumps })
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn pumps(&self) -> &[RamanPump] {
        &self.pumps
    }

    pub fn len(&self) -> usize {
        self.pumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pumps.is_empty()
    }

    pub fn total_power_mw(&self) -> f64 {
        self.pumps.iter().fold(0.0, |acc, p| acc + p.power_mw)
    }

    /// Same wavelengths with every pump switched off.
    pub fn switched_off(&self) -> Self {
        Self {
            pumps: self
                .pumps
                .iter()
                .map(|p| RamanPump::new(p.wavelength_nm, 0.0))
                .collect(),
        }
    }
}


#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub step_km: f64,
    /// Weight kept on the previous pump profile between sweeps.
    pub damping: f64,
    /// Relative boundary residual at which the iteration stops.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Signals deplete the pumps.
    pub pump_depletion: bool,
    /// Pumps exchange power among themselves.
    pub pump_pump: bool,
    /// Signal-to-signal scattering uses the triangular gain approximation.
    pub fast_signal_isrs: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step_km: 0.1,
            damping: 0.5,
            tolerance: 1e-6,
            max_iterations: 300,
            pump_depletion: true,
            pump_pump: true,
            fast_signal_isrs: false,
        }
    }
}

impl SolverConfig {
    /// Cheaper settings for inner optimization loops: 2 km steps, undamped
    /// sweeps, looser tolerance and the triangular signal-signal profile.
    pub fn search() -> Self {
        Self {
            step_km: 2.0,
            damping: 0.0,
            tolerance: 1e-4,
            fast_signal_isrs: true,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_km > 0.0) {
            return Err(Error::param("raman.step_km", "must be positive"));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(Error::param("raman.damping", "must lie in [0, 1)"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::param("raman.tolerance", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::param("raman.max_iterations", "must be at least 1"));
        }
        Ok(())
    }
}

/// Solved span: powers in mW on a uniform z grid, `[wave][node]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerProfile {
    pub z_km: Vec<f64>,
    pub signal_thz: Vec<f64>,
    pub pump_thz: Vec<f64>,
    pub signal_mw: Vec<Vec<f64>>,
    pub pump_mw: Vec<Vec<f64>>,
    pub iterations: usize,
    pub residual: f64,
}

impl PowerProfile {
    pub fn length_km(&self) -> f64 {
        *self.z_km.last().expect("non-empty grid")
    }

    pub fn step_km(&self) -> f64 {
        self.z_km[1] - self.z_km[0]
    }

    pub fn nodes(&self) -> usize {
        self.z_km.len()
    }

    pub fn signal_output_mw(&self) -> Vec<f64> {
        self.signal_mw.iter().map(|p| p[p.len() - 1]).collect()
    }

    pub fn has_pump_power(&self) -> bool {
        self.pump_mw.iter().any(|p| p.iter().any(|&v| v > 0.0))
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.signal_thz == other.signal_thz && self.z_km == other.z_km
    }
}

/// Per-channel on-off gain in dB at the span end.
pub fn on_off_gain(with_pumps: &PowerProfile, without_pumps: &PowerProfile) -> Result<Vec<f64>> {
    if !with_pumps.same_grid(without_pumps) {
        return Err(Error::MismatchedProfiles);
    }
    Ok(with_pumps
        .signal_output_mw()
        .iter()
        .zip(without_pumps.signal_output_mw())
        .map(|(on, off)| linear_to_db(on / off))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveIntegral {
    /// Integral of P(z)/P(0) over the span, km.
    pub length_km: f64,
    pub output_mw: f64,
}

pub fn effective_integrals(profile: &PowerProfile) -> Vec<EffectiveIntegral> {
    let h = profile.step_km();
    profile
        .signal_mw
        .iter()
        .map(|p| {
            let p0 = p[0];
            let normalized: Vec<f64> = p.iter().map(|v| v / p0).collect();
            EffectiveIntegral {
                length_km: simpson(&normalized, h),
                output_mw: p[p.len() - 1],
            }
        })
        .collect()
}

/// Composite Simpson on uniformly spaced samples; an odd number of intervals
/// closes with the 3/8 rule.
pub(crate) fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    match n {
        0 => 0.0,
        1 => 0.5 * h * (y[0] + y[1]),
        _ => {
            let (even_end, tail) = if n.is_multiple_of(2) { (n, 0.0) } else { (n - 3, 3.0 * h / 8.0 * (y[n - 3] + 3.0 * y[n - 2] + 3.0 * y[n - 1] + y[n])) };
            let mut s = 0.0;
            if even_end > 0 {
                s = y[0] + y[even_end];
                for (k, v) in y.iter().enumerate().take(even_end).skip(1) {
                    s += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
                }
                s *= h / 3.0;
            }
            s + tail
        }
    }
}

/// Dot product with independent partial sums so the loop vectorizes.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut s = ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

/// `out[r] (+)= sum_c m[r * cols + c] * v[c]`.
fn mat_vec(m: &[f64], cols: usize, v: &[f64], out: &mut [f64], accumulate: bool) {
    if cols == 0 {
        if !accumulate {
            out.iter_mut().for_each(|o| *o = 0.0);
        }
        return;
    }
    for (o, row) in out.iter_mut().zip(m.chunks_exact(cols)) {
        let s = dot(row, v);
        if accumulate {
            *o += s;
        } else {
            *o = s;
        }
    }
}

/// Signal-to-signal scattering with the triangular gain profile, O(N) via
/// prefix sums over a sliding window of width `window_thz`.
#[derive(Debug, Clone)]
struct TriangularIsrs {
    slope: f64,
    freqs: Vec<f64>,
    /// One past the last higher-frequency partner within the window.
    upper: Vec<usize>,
    /// First lower-frequency partner within the window.
    lower: Vec<usize>,
}

impl TriangularIsrs {
    fn new(freqs: &[f64], peak_shift: f64, peak_gain: f64) -> Self {
        let n = freqs.len();
        let eps = 1e-12;
        let upper = (0..n)
            .map(|i| i + 1 + freqs[i + 1..].iter().take_while(|&&f| f - freqs[i] <= peak_shift + eps).count())
            .collect();
        let lower = (0..n)
            .map(|i| freqs[..i].iter().position(|&f| freqs[i] - f <= peak_shift + eps).unwrap_or(i))
            .collect();
        Self {
            slope: if peak_shift > 0.0 { peak_gain / peak_shift } else { 0.0 },
            freqs: freqs.to_vec(),
            upper,
            lower,
        }
    }

    fn apply(&self, p: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) {
        let n = p.len();
        scratch.clear();
        scratch.resize(3 * (n + 1), 0.0);
        let (s0, rest) = scratch.split_at_mut(n + 1);
        let (s1, sm1) = rest.split_at_mut(n + 1);
        for j in 0..n {
            let f = self.freqs[j];
            s0[j + 1] = s0[j] + p[j];
            s1[j + 1] = s1[j] + f * p[j];
            sm1[j + 1] = sm1[j] + p[j] / f;
        }
        for i in 0..n {
            let f = self.freqs[i];
            let (a, b) = (i + 1, self.upper[i]);
            let gain = (s1[b] - s1[a]) - f * (s0[b] - s0[a]);
            let lo = self.lower[i];
            let loss = f * (f * (sm1[i] - sm1[lo]) - (s0[i] - s0[lo]));
            out[i] = self.slope * (gain - loss);
        }
    }
}

#[derive(Debug, Clone)]
enum SignalCoupling {
    Dense(Vec<f64>),
    Triangular(TriangularIsrs),
}

/// Pre-assembled coupling coefficients. Powers are in W and z in km.
#[derive(Debug, Clone)]
struct Coupling {
    n_sig: usize,
    n_pump: usize,
    freqs: Vec<f64>,
    alpha: Vec<f64>,
    ss: SignalCoupling,
    /// pumps -> signals, n_sig x n_pump
    sp: Vec<f64>,
    /// signals -> pumps, n_pump x n_sig
    ps: Vec<f64>,
    /// pumps -> pumps, n_pump x n_pump
    pp: Vec<f64>,
}

impl Coupling {
    fn new(
        signal_thz: &[f64],
        pump_thz: &[f64],
        fiber: &FiberSpec,
        config: &SolverConfig,
    ) -> Result<Self> {
        let (n_sig, n_pump) = (signal_thz.len(), pump_thz.len());
        let mut freqs = signal_thz.to_vec();
        freqs.extend_from_slice(pump_thz);
        let alpha = freqs
            .iter()
            .map(|&f| fiber.alpha_per_km(f))
            .collect::<Result<Vec<_>>>()?;
        // range-check every frequency once through the public lookup
        for &f in &freqs {
            fiber.raman_gain(freqs[0], f)?;
        }
        let ss = if config.fast_signal_isrs {
            let (shift, gain) = fiber.raman.peak();
            SignalCoupling::Triangular(TriangularIsrs::new(signal_thz, shift, gain))
        } else {
            let mut m = vec![0.0; n_sig * n_sig];
            for (i, &fi) in signal_thz.iter().enumerate() {
                for (j, &fj) in signal_thz.iter().enumerate() {
                    m[i * n_sig + j] = fiber.raman_coupling(fj, fi, false);
                }
            }
            SignalCoupling::Dense(m)
        };
        let mut sp = vec![0.0; n_sig * n_pump];
        let mut ps = vec![0.0; n_pump * n_sig];
        for (i, &fi) in signal_thz.iter().enumerate() {
            for (k, &fk) in pump_thz.iter().enumerate() {
                sp[i * n_pump + k] = fiber.raman_coupling(fk, fi, false);
                if config.pump_depletion {
                    ps[k * n_sig + i] = fiber.raman_coupling(fi, fk, false);
                }
            }
        }
        let mut pp = vec![0.0; n_pump * n_pump];
        if config.pump_pump {
            for (k, &fk) in pump_thz.iter().enumerate() {
                for (l, &fl) in pump_thz.iter().enumerate() {
                    pp[k * n_pump + l] = fiber.raman_coupling(fl, fk, false);
                }
            }
        }
        Ok(Self {
            n_sig,
            n_pump,
            freqs,
            alpha,
            ss,
            sp,
            ps,
            pp,
        })
    }

    fn signal_self(&self, ps_w: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) {
        match &self.ss {
            SignalCoupling::Dense(m) => mat_vec(m, self.n_sig, ps_w, out, false),
            SignalCoupling::Triangular(t) => t.apply(ps_w, out, scratch),
        }
    }

    /// Net scattering rates (1/km) of all waves, each in its own direction
    /// of travel, without attenuation.
    fn srs_rates(&self, sig: &[f64], pump: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) {
        let (rs, rp) = out.split_at_mut(self.n_sig);
        self.signal_self(sig, rs, scratch);
        mat_vec(&self.sp, self.n_pump, pump, rs, true);
        mat_vec(&self.ps, self.n_sig, sig, rp, false);
        mat_vec(&self.pp, self.n_pump, pump, rp, true);
    }
}

/// Assembled span problem: grid, fiber and pumps bound to a solver setup.
#[derive(Debug, Clone)]
pub struct RamanSystem {
    coupling: Coupling,
    launch_w: Vec<f64>,
    pump_w: Vec<f64>,
    signal_thz: Vec<f64>,
    pump_thz: Vec<f64>,
    length_km: f64,
    config: SolverConfig,
}

/// Fixed-step RK4 state of one wave family, node-major.
struct Trajectory {
    width: usize,
    data: Vec<f64>,
}

impl Trajectory {
    fn node(&self, n: usize) -> &[f64] {
        &self.data[n * self.width..(n + 1) * self.width]
    }
}

fn midpoint(values: &[Vec<f64>], n: usize, out: &mut [f64]) {
    let last = values.len() - 1;
    if last < 3 {
        for (k, o) in out.iter_mut().enumerate() {
            *o = 0.5 * (values[n][k] + values[n + 1][k]);
        }
        return;
    }
    // four-point Lagrange estimate at the interval center
    let (idx, w): ([usize; 4], [f64; 4]) = if n == 0 {
        ([0, 1, 2, 3], [5.0, 15.0, -5.0, 1.0])
    } else if n + 1 == last {
        ([last - 3, last - 2, last - 1, last], [1.0, -5.0, 15.0, 5.0])
    } else {
        ([n - 1, n, n + 1, n + 2], [-1.0, 9.0, 9.0, -1.0])
    };
    for (k, o) in out.iter_mut().enumerate() {
        *o = (w[0] * values[idx[0]][k]
            + w[1] * values[idx[1]][k]
            + w[2] * values[idx[2]][k]
            + w[3] * values[idx[3]][k])
            / 16.0;
    }
}

impl RamanSystem {
    pub fn new(
        grid: &ChannelGrid,
        fiber: &FiberSpec,
        pumps: &RamanPumpSet,
        config: &SolverConfig,
    ) -> Result<Self> {
        fiber.validate()?;
        config.validate()?;
        if grid.is_empty() {
            return Err(Error::param("grid", "no channels"));
        }
        let signal_thz = grid.frequencies_thz();
        let pump_thz: Vec<f64> = pumps.pumps().iter().map(RamanPump::frequency_thz).collect();
        let coupling = Coupling::new(&signal_thz, &pump_thz, fiber, config)?;
        Ok(Self {
            coupling,
            launch_w: grid.launch_powers_mw().iter().map(|p| p * 1e-3).collect(),
            pump_w: pumps.pumps().iter().map(|p| p.power_mw * 1e-3).collect(),
            signal_thz,
            pump_thz,
            length_km: fiber.length_km,
            config: *config,
        })
    }

    fn steps(&self) -> usize {
        let n = libm::ceil(self.length_km / self.config.step_km - 1e-9);
        (n as usize).max(1)
    }

    pub fn solve(&self) -> Result<PowerProfile> {
        let steps = self.steps();
        let h = self.length_km / steps as f64;
        let (sig, pump, iterations, residual) = if self.pump_w.iter().all(|&p| p == 0.0) {
            let zeros = vec![vec![0.0; self.coupling.n_pump]; steps + 1];
            let sig = self.sweep_signals(&zeros, steps, h)?;
            (sig, Trajectory { width: self.coupling.n_pump, data: vec![0.0; self.coupling.n_pump * (steps + 1)] }, 1, 0.0)
        } else {
            self.solve_sweeps(steps, h)?
        };
        let z_km = (0..=steps).map(|n| n as f64 * h).collect();
        let to_mw = |t: &Trajectory| -> Vec<Vec<f64>> {
            (0..t.width)
                .map(|w| (0..=steps).map(|n| t.node(n)[w] * 1e3).collect())
                .collect()
        };
        Ok(PowerProfile {
            z_km,
            signal_thz: self.signal_thz.clone(),
            pump_thz: self.pump_thz.clone(),
            signal_mw: to_mw(&sig),
            pump_mw: to_mw(&pump),
            iterations,
            residual,
        })
    }

    fn check(&self, values: &[f64], z_km: f64, offset: usize) -> Result<()> {
        match values.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
            Some(w) => Err(Error::NegativePower {
                z_km,
                wave: offset + w,
            }),
            None => Ok(()),
        }
    }

    /// Signals forward with pump-induced rates taken from `pumps[node]`.
    fn sweep_signals(&self, pumps: &[Vec<f64>], steps: usize, h: f64) -> Result<Trajectory> {
        let c = &self.coupling;
        let n = c.n_sig;
        let ext: Vec<Vec<f64>> = pumps
            .iter()
            .map(|p| {
                let mut e = vec![0.0; n];
                mat_vec(&c.sp, c.n_pump, p, &mut e, false);
                for (ei, ai) in e.iter_mut().zip(&c.alpha[..n]) {
                    *ei -= ai;
                }
                e
            })
            .collect();
        let self_rates = |y: &[f64], out: &mut [f64], scratch: &mut Vec<f64>| c.signal_self(y, out, scratch);
        self.rk4_family(&self.launch_w, &ext, steps, h, self_rates, |node| node as f64 * h, 0)
    }

    /// Pumps backward from z = L with signal-induced rates from `signals[node]`.
    fn sweep_pumps(&self, signals: &Trajectory, steps: usize, h: f64) -> Result<Vec<Vec<f64>>> {
        let c = &self.coupling;
        let m = c.n_pump;
        // integration variable runs from z = L towards z = 0
        let ext: Vec<Vec<f64>> = (0..=steps)
            .rev()
            .map(|node| {
                let mut e = vec![0.0; m];
                mat_vec(&c.ps, c.n_sig, signals.node(node), &mut e, false);
                for (ek, ak) in e.iter_mut().zip(&c.alpha[c.n_sig..]) {
                    *ek -= ak;
                }
                e
            })
            .collect();
        let self_rates = |y: &[f64], out: &mut [f64], _: &mut Vec<f64>| mat_vec(&c.pp, m, y, out, false);
        let traj = self.rk4_family(&self.pump_w, &ext, steps, h, self_rates, |k| (steps - k) as f64 * h, c.n_sig)?;
        Ok((0..=steps).map(|node| traj.node(steps - node).to_vec()).collect())
    }

    /// Integrates `y' = y * (ext(x) + self(y))` over `steps` RK4 steps.
    #[allow(clippy::too_many_arguments)]
    fn rk4_family<F>(
        &self,
        y0: &[f64],
        ext: &[Vec<f64>],
        steps: usize,
        h: f64,
        self_rates: F,
        z_of: impl Fn(usize) -> f64,
        offset: usize,
    ) -> Result<Trajectory>
    where
        F: Fn(&[f64], &mut [f64], &mut Vec<f64>),
    {
        let w = y0.len();
        let mut data = Vec::with_capacity(w * (steps + 1));
        data.extend_from_slice(y0);
        let mut y = y0.to_vec();
        let mut mid = vec![0.0; w];
        let mut tmp = vec![0.0; w];
        let mut r = vec![0.0; w];
        let mut k = [vec![0.0; w], vec![0.0; w], vec![0.0; w], vec![0.0; w]];
        let mut scratch = Vec::new();
        for n in 0..steps {
            midpoint(ext, n, &mut mid);
            let stage_ext = [&ext[n][..], &mid[..], &mid[..], &ext[n + 1][..]];
            for s in 0..4 {
                let state: &[f64] = if s == 0 { &y } else { &tmp };
                self_rates(state, &mut r, &mut scratch);
                for i in 0..w {
                    k[s][i] = state[i] * (stage_ext[s][i] + r[i]);
                }
                if s < 3 {
                    let scale = if s == 2 { h } else { 0.5 * h };
                    for i in 0..w {
                        tmp[i] = y[i] + scale * k[s][i];
                    }
                }
            }
            for i in 0..w {
                y[i] += h / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
            }
            self.check(&y, z_of(n + 1), offset)?;
            data.extend_from_slice(&y);
        }
        Ok(Trajectory { width: w, data })
    }

    fn undepleted_pumps(&self, steps: usize, h: f64) -> Vec<Vec<f64>> {
        let alpha = &self.coupling.alpha[self.coupling.n_sig..];
        (0..=steps)
            .map(|node| {
                let dist = (steps - node) as f64 * h;
                self.pump_w
                    .iter()
                    .zip(alpha)
                    .map(|(p, a)| p * libm::exp(-a * dist))
                    .collect()
            })
            .collect()
    }

    fn solve_sweeps(&self, steps: usize, h: f64) -> Result<(Trajectory, Trajectory, usize, f64)> {
        let mut pumps = self.undepleted_pumps(steps, h);
        let mut residual = f64::INFINITY;
        for it in 1..=self.config.max_iterations {
            let sig = self.sweep_signals(&pumps, steps, h)?;
            let fresh = self.sweep_pumps(&sig, steps, h)?;
            residual = 0.0;
            for (old, new) in pumps.iter_mut().zip(&fresh) {
                for (o, &v) in old.iter_mut().zip(new) {
                    if v > 0.0 {
                        residual = f64::max(residual, (v - *o).abs() / v);
                    }
                    *o = self.config.damping * *o + (1.0 - self.config.damping) * v;
                }
            }
            if residual < self.config.tolerance {
                let sig = self.sweep_signals(&pumps, steps, h)?;
                let pump = Trajectory {
                    width: self.coupling.n_pump,
                    data: pumps.concat(),
                };
                return Ok((sig, pump, it, residual));
            }
        }
        Err(Error::NotConverged {
            iterations: self.config.max_iterations,
            residual,
        })
    }

    /// Photon-number balance of the scattering terms at one profile node:
    /// returns `(sum_i T_i / f_i, sum_i |T_i| / f_i)` where `T_i` is the
    /// scattering part of `dP_i` in the wave's own direction of travel.
    /// With full coupling the first entry vanishes up to rounding.
    pub fn photon_flux_balance(&self, profile: &PowerProfile, node: usize) -> (f64, f64) {
        let c = &self.coupling;
        let sig: Vec<f64> = profile.signal_mw.iter().map(|p| p[node] * 1e-3).collect();
        let pump: Vec<f64> = profile.pump_mw.iter().map(|p| p[node] * 1e-3).collect();
        let mut r = vec![0.0; c.n_sig + c.n_pump];
        let mut scratch = Vec::new();
        c.srs_rates(&sig, &pump, &mut r, &mut scratch);
        let powers = sig.iter().chain(&pump);
        let mut net = 0.0;
        let mut scale = 0.0;
        for ((p, rate), f) in powers.zip(&r).zip(&c.freqs) {
            let t = p * rate / f;
            net += t;
            scale += t.abs();
        }
        (net, scale)
    }
}

pub fn propagate(
    grid: &ChannelGrid,
    fiber: &FiberSpec,
    pumps: &RamanPumpSet,
    config: &SolverConfig,
) -> Result<PowerProfile> {
    RamanSystem::new(grid, fiber, pumps, config)?.solve()
}
