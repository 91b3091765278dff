//! Proximal mappings `Prox_{tP}(x) = argmin_y t·P(y) + ½‖y − x‖²`.
//!
//! Every kernel is exact (closed form or finite sort-based procedure); none of
//! them iterate to a tolerance.

use crate::error::{check_len, Result, SieveError};
use crate::model::{Penalty, RegularizerSpec};

/// Prox of `t·P` at `x`.
pub fn prox(spec: &RegularizerSpec, x: &[f64], t: f64) -> Result<Vec<f64>> {
    check_len("prox argument", spec.dim(), x.len())?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(SieveError::InvalidInput(format!("prox step must be positive, got {t}")));
    }
    Ok(match spec.penalty() {
        Penalty::Lasso { lambda } => lasso(x, t * lambda),
        Penalty::ElasticNet { l1, l2 } => elastic_net(x, t * l1, t * l2),
        Penalty::SparseGroupLasso {
            l1,
            l2,
            weights,
            partition,
        } => {
            let mut y = lasso(x, t * l1);
            for (group, w) in partition.groups().iter().zip(weights) {
                block_soft_threshold(&mut y, group, t * l2 * w);
            }
            y
        }
        Penalty::ExclusiveLasso {
            lambda,
            weights,
            partition,
        } => {
            let mut y = vec![0.0; x.len()];
            for group in partition.groups() {
                exclusive_group(x, weights, group, t * lambda, &mut y);
            }
            y
        }
        Penalty::Slope { weights } => slope(x, weights, t),
    })
}

/// `sign(v)·max(|v| − τ, 0)`, with exact zeros returned as `+0.0`.
pub fn soft_threshold(v: f64, tau: f64) -> f64 {
    let mag = v.abs() - tau;
    if mag > 0.0 {
        with_sign(mag, v)
    } else {
        0.0
    }
}

fn with_sign(mag: f64, reference: f64) -> f64 {
    if mag == 0.0 {
        0.0
    } else if reference < 0.0 {
        -mag
    } else {
        mag
    }
}

fn lasso(x: &[f64], tau: f64) -> Vec<f64> {
    x.iter().map(|&v| soft_threshold(v, tau)).collect()
}

fn elastic_net(x: &[f64], tau1: f64, tau2: f64) -> Vec<f64> {
    let shrink = 1.0 + 2.0 * tau2;
    x.iter().map(|&v| soft_threshold(v, tau1) / shrink).collect()
}

/// `v_G ← max(1 − τ/‖v_G‖, 0)·v_G`.
fn block_soft_threshold(v: &mut [f64], group: &[usize], tau: f64) {
    let norm = group.iter().map(|&j| v[j] * v[j]).sum::<f64>().sqrt();
    let scale = if norm > tau { 1.0 - tau / norm } else { 0.0 };
    for &j in group {
        v[j] = if scale == 0.0 { 0.0 } else { v[j] * scale };
    }
}

/// Prox of `τ‖w_G ∘ y_G‖₁²` on one group.
///
/// The solution is `y_i = sign(x_i)·max(|x_i| − 2τ w_i s, 0)` with `s = Σ w_j|y_j|`.
/// Sorting `|x_i|/w_i` in decreasing order, the active coordinates form a prefix,
/// and on a prefix `P` the fixed point is `s = Σ_P w_j|x_j| / (1 + 2τ Σ_P w_j²)`.
fn exclusive_group(x: &[f64], weights: &[f64], group: &[usize], tau: f64, out: &mut [f64]) {
    let mut order: Vec<usize> = group.to_vec();
    // stable sort keeps original order among ties
    order.sort_by(|&a, &b| (x[b].abs() / weights[b]).total_cmp(&(x[a].abs() / weights[a])));

    let (mut num, mut den) = (0.0, 0.0);
    let mut s = 0.0;
    for &j in &order {
        let (xj, wj) = (x[j].abs(), weights[j]);
        let cand_num = num + wj * xj;
        let cand_den = den + wj * wj;
        let cand_s = cand_num / (1.0 + 2.0 * tau * cand_den);
        if xj / wj > 2.0 * tau * cand_s {
            num = cand_num;
            den = cand_den;
            s = cand_s;
        } else {
            break;
        }
    }
    for &j in group {
        let mag = x[j].abs() - 2.0 * tau * weights[j] * s;
        out[j] = if mag > 0.0 { with_sign(mag, x[j]) } else { 0.0 };
    }
}

/// Sorted-ℓ1 prox: sort `|x|` decreasingly, subtract `t·λ`, project onto the
/// nonincreasing cone by pool-adjacent-violators, clip at zero, then unsort and
/// restore signs.
fn slope(x: &[f64], weights: &[f64], t: f64) -> Vec<f64> {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()));

    // blocks of (start, len, sum)
    let mut blocks: Vec<(usize, usize, f64)> = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let mut block = (k, 1usize, x[j].abs() - t * weights[k]);
        while let Some(&(start, len, sum)) = blocks.last() {
            if block.2 / block.1 as f64 > sum / len as f64 {
                blocks.pop();
                block = (start, len + block.1, sum + block.2);
            } else {
                break;
            }
        }
        blocks.push(block);
    }

    let mut y = vec![0.0; n];
    for (start, len, sum) in blocks {
        let value = (sum / len as f64).max(0.0);
        for &j in &order[start..start + len] {
            y[j] = with_sign(value, x[j]);
        }
    }
    y
}

/// `t·P(y) + ½‖y − x‖²`.
pub fn prox_objective(spec: &RegularizerSpec, x: &[f64], t: f64, y: &[f64]) -> Result<f64> {
    check_len("prox objective point", x.len(), y.len())?;
    let quad: f64 = y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(t * spec.evaluate(y)? + 0.5 * quad)
}

const PROBE_STEP: f64 = 1e-4;

/// How much a probe point improves on `y` as a minimizer of the prox objective.
///
/// The probe set is: each coordinate moved by ±1e-4, each coordinate negated,
/// each coordinate set to zero, `y` scaled by `1 ± 1e-4`, and the zero vector.
/// A correct prox output yields 0 up to rounding.
pub fn prox_optimality_gap(spec: &RegularizerSpec, x: &[f64], t: f64, y: &[f64]) -> Result<f64> {
    check_len("prox optimality gap argument", spec.dim(), x.len())?;
    let base = prox_objective(spec, x, t, y)?;
    let mut best = f64::INFINITY;
    let mut probe = y.to_vec();
    let mut eval = |p: &[f64]| -> Result<()> {
        best = best.min(prox_objective(spec, x, t, p)?);
        Ok(())
    };
    for i in 0..y.len() {
        let original = y[i];
        for candidate in [original + PROBE_STEP, original - PROBE_STEP, -original, 0.0] {
            probe[i] = candidate;
            eval(&probe)?;
        }
        probe[i] = original;
    }
    for factor in [1.0 + PROBE_STEP, 1.0 - PROBE_STEP] {
        let scaled: Vec<f64> = y.iter().map(|v| v * factor).collect();
        eval(&scaled)?;
    }
    eval(&vec![0.0; y.len()])?;
    Ok((base - best).max(0.0))
}
