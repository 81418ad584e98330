//! Simple and Holt (trend) exponential smoothing.
//!
//! Free parameters are chosen by minimizing the in-sample one-step squared
//! error: a 0.01 grid for simple smoothing, a coarse grid followed by
//! Nelder-Mead refinement for Holt.

use super::ForecastError;

pub(crate) struct SesFit {
    #[allow(dead_code)]
    pub alpha: f64,
    pub level: f64,
}

/// One-step SSE and final level of the simple smoothing recursion
/// `l_t = alpha * y_t + (1 - alpha) * l_{t-1}` with `l_0 = y_0`.
fn ses_pass(values: &[f64], alpha: f64) -> (f64, f64) {
    let mut level = values[0];
    let mut sse = 0.0;
    for &y in &values[1..] {
        let err = y - level;
        sse += err * err;
        level += alpha * err;
    }
    (sse, level)
}

pub(crate) fn fit_ses(values: &[f64], alpha: Option<f64>) -> Result<SesFit, ForecastError> {
    if values.len() < 2 {
        return Err(ForecastError::InsufficientData {
            needed: 2,
            got: values.len(),
        });
    }
    let alpha = match alpha {
        Some(a) => a,
        None => {
            let mut best = (f64::INFINITY, 0.0);
            for i in 0..=100 {
                let a = i as f64 / 100.0;
                let (sse, _) = ses_pass(values, a);
                if sse < best.0 {
                    best = (sse, a);
                }
            }
            best.1
        }
    };
    let (_, level) = ses_pass(values, alpha);
    Ok(SesFit { alpha, level })
}

pub(crate) struct HoltFit {
    #[allow(dead_code)]
    pub alpha: f64,
    #[allow(dead_code)]
    pub beta: f64,
    pub level: f64,
    pub trend: f64,
}

/// One-step SSE and final state of the Holt recursion with
/// `l_0 = y_0`, `b_0 = y_1 - y_0`.
fn holt_pass(values: &[f64], alpha: f64, beta: f64) -> (f64, f64, f64) {
    let mut level = values[0];
    let mut trend = values[1] - values[0];
    let mut sse = 0.0;
    for &y in &values[1..] {
        let predicted = level + trend;
        let err = y - predicted;
        sse += err * err;
        let new_level = alpha * y + (1.0 - alpha) * predicted;
        trend = beta * (new_level - level) + (1.0 - beta) * trend;
        level = new_level;
    }
    (sse, level, trend)
}

pub(crate) fn fit_holt(
    values: &[f64],
    alpha: Option<f64>,
    beta: Option<f64>,
) -> Result<HoltFit, ForecastError> {
    if values.len() < 2 {
        return Err(ForecastError::InsufficientData {
            needed: 2,
            got: values.len(),
        });
    }
    let (alpha, beta) = match (alpha, beta) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let objective = |params: &[f64]| {
                let a = alpha.unwrap_or(params[0]);
                let b = beta.unwrap_or(*params.last().expect("at least one free parameter"));
                if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                    return f64::INFINITY;
                }
                holt_pass(values, a, b).0
            };
            let free = alpha.is_none() as usize + beta.is_none() as usize;
            // Coarse grid start.
            let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
            let mut best = (f64::INFINITY, vec![0.5; free]);
            let mut candidate = vec![0.0; free];
            let mut scan = |candidate: &mut Vec<f64>| {
                let sse = objective(candidate);
                if sse < best.0 {
                    best = (sse, candidate.clone());
                }
            };
            if free == 1 {
                for &g in &grid {
                    candidate[0] = g;
                    scan(&mut candidate);
                }
            } else {
                for &g0 in &grid {
                    for &g1 in &grid {
                        candidate[0] = g0;
                        candidate[1] = g1;
                        scan(&mut candidate);
                    }
                }
            }
            let optimum = nelder_mead(&objective, &best.1, 0.05);
            let a = alpha.unwrap_or(optimum[0].clamp(0.0, 1.0));
            let b = beta.unwrap_or(optimum.last().copied().unwrap().clamp(0.0, 1.0));
            (a, b)
        }
    };
    let (_, level, trend) = holt_pass(values, alpha, beta);
    Ok(HoltFit {
        alpha,
        beta,
        level,
        trend,
    })
}

/// Derivative-free Nelder-Mead minimization over a low-dimensional box-free
/// objective (constraints handled by infinite penalties).
fn nelder_mead(objective: &dyn Fn(&[f64]) -> f64, start: &[f64], step: f64) -> Vec<f64> {
    let dim = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), objective(start)));
    for i in 0..dim {
        let mut vertex = start.to_vec();
        vertex[i] = (vertex[i] + step).min(1.0);
        if (vertex[i] - start[i]).abs() < 1e-12 {
            vertex[i] = (start[i] - step).max(0.0);
        }
        simplex.push((vertex.clone(), objective(&vertex)));
    }

    for _ in 0..200 {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
        let spread = simplex.last().unwrap().1 - simplex[0].1;
        if spread.abs() < 1e-12 {
            break;
        }
        let worst = simplex.len() - 1;
        let centroid: Vec<f64> = (0..dim)
            .map(|i| simplex[..worst].iter().map(|(v, _)| v[i]).sum::<f64>() / worst as f64)
            .collect();
        let reflect = |coef: f64| -> Vec<f64> {
            (0..dim)
                .map(|i| centroid[i] + coef * (centroid[i] - simplex[worst].0[i]))
                .collect()
        };

        let reflected = reflect(1.0);
        let reflected_value = objective(&reflected);
        if reflected_value < simplex[0].1 {
            let expanded = reflect(2.0);
            let expanded_value = objective(&expanded);
            simplex[worst] = if expanded_value < reflected_value {
                (expanded, expanded_value)
            } else {
                (reflected, reflected_value)
            };
        } else if reflected_value < simplex[worst - 1].1 {
            simplex[worst] = (reflected, reflected_value);
        } else {
            let contracted = reflect(-0.5);
            let contracted_value = objective(&contracted);
            if contracted_value < simplex[worst].1 {
                simplex[worst] = (contracted, contracted_value);
            } else {
                let best = simplex[0].0.clone();
                for (vertex, value) in simplex.iter_mut().skip(1) {
                    for (v, b) in vertex.iter_mut().zip(&best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    *value = objective(vertex);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
    simplex[0].0.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ses_alpha_one_is_last_value_carry_forward() {
        let values = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        let fit = fit_ses(&values, Some(1.0)).unwrap();
        assert_eq!(fit.level, 6.0);
    }

    #[test]
    fn ses_grid_picks_high_alpha_on_a_random_walk() {
        // Persistent series: the optimizer should favor heavy updating.
        let mut values = vec![0.0f64];
        let mut state = 88172645463325252u64;
        for _ in 0..300 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let step = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            values.push(values.last().unwrap() + step);
        }
        let fit = fit_ses(&values, None).unwrap();
        assert!(fit.alpha > 0.5, "alpha = {}", fit.alpha);
    }

    #[test]
    fn holt_tracks_a_linear_trend() {
        let values: Vec<f64> = (0..50).map(|i| 2.0 + 0.5 * i as f64).collect();
        let fit = fit_holt(&values, None, None).unwrap();
        let forecast = fit.level + 3.0 * fit.trend;
        assert_abs_diff_eq!(forecast, 2.0 + 0.5 * 52.0, epsilon = 1e-3);
    }

    #[test]
    fn holt_with_fixed_parameters_is_deterministic() {
        let values: Vec<f64> = (0..30).map(|i| (i as f64 * 0.3).sin()).collect();
        let a = fit_holt(&values, Some(0.4), Some(0.2)).unwrap();
        let b = fit_holt(&values, Some(0.4), Some(0.2)).unwrap();
        assert_eq!(a.level, b.level);
        assert_eq!(a.trend, b.trend);
    }
}
