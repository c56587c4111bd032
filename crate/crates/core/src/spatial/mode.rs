use super::{check_odd_window, check_positive, neighborhood, per_pixel};
use crate::error::Result;
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeKind {
    /// Most populated histogram bin of the neighbourhood.
    #[default]
    Global,
    /// Mode reached by mean-shift iteration seeded at the centre pixel.
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub window: usize,
    pub kind: ModeKind,
    pub bin_width: f64,
}

impl Default for ModeParams {
    fn default() -> Self {
        Self {
            window: 5,
            kind: ModeKind::Global,
            bin_width: 8.0,
        }
    }
}

const LOCAL_TOLERANCE: f64 = 1e-3;
const LOCAL_MAX_ITERATIONS: usize = 50;

/// Global mode: the samples of the fullest bin (width `bin_width`) are
/// averaged; ties go to the bin whose centre is nearest the centre pixel.
fn global_mode(values: &[f64], center: f64, bin_width: f64) -> f64 {
    let mut bins: Vec<(i64, f64)> = values
        .iter()
        .map(|&v| ((v / bin_width).floor() as i64, v))
        .collect();
    bins.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    // (count, distance of bin centre to the centre pixel, mean). Means are
    // taken relative to the bin's first sample so equal samples come back
    // bit-exact.
    let mut best: Option<(usize, f64, f64)> = None;
    for run in bins.chunk_by(|a, b| a.0 == b.0) {
        let count = run.len();
        let bin_center = (run[0].0 as f64 + 0.5) * bin_width;
        let dist = (bin_center - center).abs();
        let base = run[0].1;
        let mean = base + run.iter().map(|x| x.1 - base).sum::<f64>() / count as f64;
        let better = match best {
            None => true,
            Some((bc, bd, _)) => count > bc || (count == bc && dist < bd),
        };
        if better {
            best = Some((count, dist, mean));
        }
    }
    best.expect("non-empty neighbourhood").2
}

fn local_mode(values: &[f64], center: f64, bin_width: f64) -> f64 {
    let mut x = center;
    for _ in 0..LOCAL_MAX_ITERATIONS {
        let (sum, n) = values
            .iter()
            .filter(|&&v| (v - x).abs() <= bin_width)
            .fold((0.0, 0usize), |(s, n), &v| (s + (v - x), n + 1));
        if n == 0 {
            break;
        }
        let next = x + sum / n as f64;
        let moved = (next - x).abs();
        x = next;
        if moved < LOCAL_TOLERANCE {
            break;
        }
    }
    x
}

pub fn mode_filter(img: &GrayImage, p: &ModeParams) -> Result<GrayImage> {
    check_odd_window(p.window)?;
    check_positive("bin_width", p.bin_width)?;
    let half = p.window / 2;
    Ok(per_pixel(img, |r, c| {
        let mut buf = Vec::with_capacity(p.window * p.window);
        neighborhood(img, r, c, half, &mut buf);
        let center = img.get(r, c);
        match p.kind {
            ModeKind::Global => global_mode(&buf, center, p.bin_width),
            ModeKind::Local => local_mode(&buf, center, p.bin_width),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_both_kinds() {
        let img = GrayImage::filled(6, 6, 77.3).unwrap();
        for kind in [ModeKind::Global, ModeKind::Local] {
            let p = ModeParams {
                kind,
                ..ModeParams::default()
            };
            assert_eq!(mode_filter(&img, &p).unwrap(), img);
        }
    }

    #[test]
    fn dominant_bin_wins() {
        let vals = [0.0, 0.0, 0.0, 255.0, 0.0, 255.0, 0.0, 0.0, 0.0];
        assert_eq!(global_mode(&vals, 255.0, 8.0), 0.0);
    }

    #[test]
    fn bimodal_neighbourhood() {
        // 14 samples at 50, 10 at 200, centre pixel 190
        let mut vals = vec![50.0; 14];
        vals.extend(vec![200.0; 10]);
        vals.push(190.0);
        assert_eq!(global_mode(&vals, 190.0, 16.0), 50.0);
        // mean shift from 190 captures {190, 200 x 10}: 2190 / 11
        let local = local_mode(&vals, 190.0, 16.0);
        assert!((local - 2190.0 / 11.0).abs() < 1e-9);
        assert!((local - 200.0).abs() < 1.5);
    }

    #[test]
    fn tie_prefers_bin_near_centre() {
        let vals = [10.0, 10.0, 100.0, 100.0, 60.0];
        assert_eq!(global_mode(&vals, 95.0, 8.0), 100.0);
        assert_eq!(global_mode(&vals, 12.0, 8.0), 10.0);
    }

    #[test]
    fn invalid_params() {
        let img = GrayImage::filled(4, 4, 0.0).unwrap();
        let p = ModeParams {
            window: 4,
            ..ModeParams::default()
        };
        assert!(mode_filter(&img, &p).is_err());
        let p = ModeParams {
            bin_width: 0.0,
            ..ModeParams::default()
        };
        assert!(mode_filter(&img, &p).is_err());
    }
}
