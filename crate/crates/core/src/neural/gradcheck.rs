//! Central finite differences over a model's flat parameters, used as an
//! independent check on the analytic reverse pass.

use super::network::Parameters;

/// Worst relative error between `analytic` and the central difference of `loss`
/// at the parameter indices in `probes`.
pub fn max_relative_error<M, F>(model: &M, analytic: &[f64], probes: &[usize], step: f64, mut loss: F) -> f64
where
    M: Parameters + Clone,
    F: FnMut(&M) -> f64,
{
    let base = model.flat_params();
    let mut probe = model.clone();
    let mut worst = 0.0f64;
    for &i in probes {
        let mut p = base.clone();
        p[i] = base[i] + step;
        probe.set_flat_params(&p).expect("same shape");
        let up = loss(&probe);
        p[i] = base[i] - step;
        probe.set_flat_params(&p).expect("same shape");
        let down = loss(&probe);
        let numeric = (up - down) / (2.0 * step);
        let scale = analytic[i].abs().max(numeric.abs()).max(1e-7);
        worst = worst.max((analytic[i] - numeric).abs() / scale);
    }
    worst
}
