use std::f64::consts::PI;

use hybrid_link_core::FiberSpec;

/// Center NLI power spectral density of a rectangular WDM comb, integrated
/// by the midpoint rule over the full two-dimensional GN domain, times the
/// symbol rate. `centers` are offsets in THz from the channel under test.
pub fn gn_reference_w(fiber: &FiberSpec, centers: &[f64], rate_thz: f64, power_w: f64, alpha: f64, beta2: f64, cells: usize) -> f64 {
    let psd = power_w / rate_thz;
    let occupied = |f: f64| centers.iter().any(|c| (f - c).abs() <= 0.5 * rate_thz);
    let lo = centers.iter().cloned().fold(f64::INFINITY, f64::min) - 0.5 * rate_thz;
    let hi = centers.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.5 * rate_thz;
    let span = hi - lo;
    let h = span / cells as f64;
    let l = fiber.length_km;
    let decay = (-alpha * l).exp();
    let mut sum = 0.0;
    for a in 0..cells {
        let f1 = lo + (a as f64 + 0.5) * h;
        if !occupied(f1) {
            continue;
        }
        for b in 0..cells {
            let f2 = lo + (b as f64 + 0.5) * h;
            if !occupied(f2) || !occupied(f1 + f2) {
                continue;
            }
            let phi = 4.0 * PI * PI * beta2 * f1 * f2;
            let (re_num, im_num) = (1.0 - decay * (phi * l).cos(), -decay * (phi * l).sin());
            let mu2 = (re_num * re_num + im_num * im_num) / (alpha * alpha + phi * phi);
            sum += mu2;
        }
    }
    let gamma = fiber.nonlinear_coefficient;
    16.0 / 27.0 * gamma * gamma * psd.powi(3) * sum * h * h * rate_thz
}
