//! Scalar estimators extracted from intensity profiles: widths, fringe
//! visibility, correlations. The paper reports patterns as images, so every
//! quantitative assertion in the scenario suite goes through one of these.

/// 3-point median smoothing, endpoints copied.
pub fn median3(row: &[f64]) -> Vec<f64> {
    if row.len() < 3 {
        return row.to_vec();
    }
    let mut out = row.to_vec();
    for i in 1..row.len() - 1 {
        let (a, b, c) = (row[i - 1], row[i], row[i + 1]);
        out[i] = a.max(b).max(c).min(a.max(b.min(c))).min(b.max(a.min(c)));
    }
    out
}

/// Median of the values above 20% of the peak: a ringing-robust estimate of
/// the plateau level of a top-hat-like profile.
pub fn plateau_level(row: &[f64]) -> f64 {
    let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut lit: Vec<f64> = row.iter().cloned().filter(|&v| v > 0.2 * max).collect();
    if lit.is_empty() {
        return max;
    }
    lit.sort_by(|a, b| a.partial_cmp(b).unwrap());
    lit[lit.len() / 2]
}

/// Width of the profile in cells, measured between the outermost linear
/// crossings of half the plateau level.
pub fn half_plateau_width_cells(row: &[f64]) -> f64 {
    let thr = 0.5 * plateau_level(row);
    let mut left = None;
    for i in 0..row.len() {
        if row[i] > thr {
            left = Some(if i == 0 {
                0.0
            } else {
                let frac = (thr - row[i - 1]) / (row[i] - row[i - 1]);
                (i - 1) as f64 + frac
            });
            break;
        }
    }
    let mut right = None;
    for i in (0..row.len()).rev() {
        if row[i] > thr {
            right = Some(if i == row.len() - 1 {
                (row.len() - 1) as f64
            } else {
                let frac = (thr - row[i + 1]) / (row[i] - row[i + 1]);
                (i + 1) as f64 - frac
            });
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) if r > l => r - l,
        _ => 0.0,
    }
}

/// Fringe visibility of a profile: the deepest adjacent maximum/minimum
/// contrast after 3-cell median smoothing, restricted to extrema pairs
/// closer than `max_pair_separation` cells whose maximum rises above
/// `envelope_floor` times the global peak. Separated envelope lobes (the
/// gap of a two-slit image) pair farther apart than genuine fringes and are
/// excluded by the separation bound.
pub fn fringe_visibility(row: &[f64], max_pair_separation: usize, envelope_floor: f64) -> f64 {
    let smooth = median3(row);
    let peak = smooth.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if peak <= 0.0 {
        return 0.0;
    }
    // strict local extrema with plateau tolerance
    let mut extrema: Vec<(usize, f64, bool)> = Vec::new(); // (index, value, is_max)
    for i in 1..smooth.len() - 1 {
        let v = smooth[i];
        if v > smooth[i - 1] && v >= smooth[i + 1] {
            extrema.push((i, v, true));
        } else if v < smooth[i - 1] && v <= smooth[i + 1] {
            extrema.push((i, v, false));
        }
    }
    let mut best: f64 = 0.0;
    for w in extrema.windows(2) {
        let (i1, v1, m1) = w[0];
        let (i2, v2, m2) = w[1];
        if m1 == m2 || i2 - i1 > max_pair_separation {
            continue;
        }
        let (vmax, vmin) = if m1 { (v1, v2) } else { (v2, v1) };
        if vmax < envelope_floor * peak {
            continue;
        }
        let denom = vmax + vmin;
        if denom > 0.0 {
            best = best.max((vmax - vmin) / denom);
        }
    }
    best.clamp(0.0, 1.0)
}

/// Contrast of the central fringe system: the largest smoothed local
/// maximum within `reach` cells of the profile center, against the nearest
/// local minima outward of it. Returns 0 when the center is dark (below 5%
/// of the global peak) or featureless.
pub fn central_fringe_visibility(row: &[f64], reach: usize) -> f64 {
    let sm = median3(row);
    let n = sm.len();
    if n < 5 {
        return 0.0;
    }
    let c = n / 2;
    let peak = sm.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if peak <= 0.0 {
        return 0.0;
    }
    let lo = c.saturating_sub(reach).max(1);
    let hi = (c + reach).min(n - 2);
    let mut best: Option<usize> = None;
    for i in lo..=hi {
        if sm[i] > sm[i - 1] && sm[i] >= sm[i + 1] && best.map_or(true, |b| sm[i] > sm[b]) {
            best = Some(i);
        }
    }
    let Some(im) = best else { return 0.0 };
    if sm[im] < 0.05 * peak {
        return 0.0;
    }
    let mut vmin = f64::INFINITY;
    let mut i = im;
    while i + 1 < n - 1 {
        i += 1;
        if sm[i] < sm[i - 1] && sm[i] <= sm[i + 1] {
            vmin = vmin.min(sm[i]);
            break;
        }
    }
    i = im;
    while i > 1 {
        i -= 1;
        if sm[i] < sm[i + 1] && sm[i] <= sm[i - 1] {
            vmin = vmin.min(sm[i]);
            break;
        }
    }
    if !vmin.is_finite() {
        return 0.0;
    }
    ((sm[im] - vmin) / (sm[im] + vmin)).clamp(0.0, 1.0)
}

/// Pearson correlation between two equal-length sample sets.
pub fn pearson_correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va <= 0.0 || vb <= 0.0 {
        return 0.0;
    }
    cov / (va * vb).sqrt()
}

/// Linear interpolation of a row at a fractional index; zero outside.
pub fn sample_row(row: &[f64], index: f64) -> f64 {
    if index < 0.0 || index > (row.len() - 1) as f64 {
        return 0.0;
    }
    let i = (index.floor() as usize).min(row.len() - 2);
    let t = index - i as f64;
    row[i] * (1.0 - t) + row[i + 1] * t
}

/// Relative L2 distance between two nonnegative profiles after scaling each
/// to unit sum.
pub fn rel_l2_profiles(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let sa: f64 = a.iter().sum();
    let sb: f64 = b.iter().sum();
    if sa <= 0.0 || sb <= 0.0 {
        return f64::INFINITY;
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in a.iter().zip(b) {
        let u = x / sa;
        let v = y / sb;
        num += (u - v) * (u - v);
        den += u * u;
    }
    (num / den).sqrt()
}
