//! Total-variation denoising by explicit gradient descent on
//! `F(u) = sum sqrt(|grad u|^2 + eps^2) + (lambda / 2) * sum (u - u0)^2`.
//!
//! `grad` uses forward differences with Neumann borders (the difference past
//! the last row or column is zero). Large `lambda` favours fidelity, small
//! `lambda` favours smoothing.

use super::check_positive;
use crate::error::Result;
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvParams {
    /// Fidelity weight.
    pub lambda: f64,
    pub step: f64,
    pub iterations: usize,
    /// Regularizer keeping the gradient norm differentiable at zero.
    pub epsilon: f64,
}

impl Default for TvParams {
    fn default() -> Self {
        Self {
            lambda: 0.1,
            step: 0.1,
            iterations: 100,
            epsilon: 1e-6,
        }
    }
}

impl TvParams {
    fn validate(&self) -> Result<()> {
        check_positive("lambda", self.lambda)?;
        check_positive("step", self.step)?;
        check_positive("epsilon", self.epsilon)
    }
}

fn forward_differences(data: &[f64], w: usize, h: usize) -> (Vec<f64>, Vec<f64>) {
    let mut dx = vec![0.0; w * h];
    let mut dy = vec![0.0; w * h];
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if c + 1 < w {
                dx[i] = data[i + 1] - data[i];
            }
            if r + 1 < h {
                dy[i] = data[i + w] - data[i];
            }
        }
    }
    (dx, dy)
}

/// Discrete total variation `sum sqrt(dx^2 + dy^2 + eps^2)`; `eps = 0` gives
/// the plain isotropic TV.
pub fn discrete_tv(img: &GrayImage, epsilon: f64) -> f64 {
    let (dx, dy) = forward_differences(img.data(), img.width(), img.height());
    dx.iter()
        .zip(&dy)
        .map(|(a, b)| (a * a + b * b + epsilon * epsilon).sqrt())
        .sum()
}

/// Objective value of `u` for noisy input `u0`.
pub fn tv_energy(u: &GrayImage, u0: &GrayImage, p: &TvParams) -> Result<f64> {
    u.same_dims(u0)?;
    let fidelity: f64 = u
        .data()
        .iter()
        .zip(u0.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(discrete_tv(u, p.epsilon) + 0.5 * p.lambda * fidelity)
}

/// One gradient-descent step from `u` towards the minimizer for data `u0`.
pub fn tv_step(u: &GrayImage, u0: &GrayImage, p: &TvParams) -> Result<GrayImage> {
    p.validate()?;
    u.same_dims(u0)?;
    let (w, h) = (u.width(), u.height());
    let data = u.data();
    let (dx, dy) = forward_differences(data, w, h);
    let eps2 = p.epsilon * p.epsilon;
    let (px, py): (Vec<f64>, Vec<f64>) = dx
        .iter()
        .zip(&dy)
        .map(|(a, b)| {
            let n = (a * a + b * b + eps2).sqrt();
            (a / n, b / n)
        })
        .unzip();
    let mut next = Vec::with_capacity(w * h);
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            // Negative divergence, i.e. the adjoint of the forward difference.
            let mut div = 0.0;
            if c + 1 < w {
                div += px[i];
            }
            if c > 0 {
                div -= px[i - 1];
            }
            if r + 1 < h {
                div += py[i];
            }
            if r > 0 {
                div -= py[i - w];
            }
            let grad = -div + p.lambda * (data[i] - u0.data()[i]);
            next.push(data[i] - p.step * grad);
        }
    }
    GrayImage::new(w, h, next)
}

pub fn tv_denoise(img: &GrayImage, p: &TvParams) -> Result<GrayImage> {
    p.validate()?;
    let mut u = img.clone();
    for _ in 0..p.iterations {
        u = tv_step(&u, img, p)?;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated_tv() {
        let img = GrayImage::new(2, 2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(discrete_tv(&img, 0.0), 2.0);
    }

    #[test]
    fn constant_is_stationary() {
        let img = GrayImage::filled(6, 6, 80.0).unwrap();
        assert_eq!(discrete_tv(&img, 0.0), 0.0);
        assert_eq!(tv_denoise(&img, &TvParams::default()).unwrap(), img);
    }

    #[test]
    fn step_lowers_energy_on_a_noisy_edge() {
        let img = GrayImage::from_fn(
            12,
            12,
            |r, c| if c < 6 { 50.0 } else { 150.0 } + ((r * 7 + c * 13) % 5) as f64,
        )
        .unwrap();
        let p = TvParams::default();
        let e0 = tv_energy(&img, &img, &p).unwrap();
        let u1 = tv_step(&img, &img, &p).unwrap();
        assert!(tv_energy(&u1, &img, &p).unwrap() < e0);
    }

    #[test]
    fn invalid_params() {
        let img = GrayImage::filled(3, 3, 0.0).unwrap();
        for p in [
            TvParams {
                lambda: 0.0,
                ..TvParams::default()
            },
            TvParams {
                step: -1.0,
                ..TvParams::default()
            },
            TvParams {
                epsilon: 0.0,
                ..TvParams::default()
            },
        ] {
            assert!(tv_denoise(&img, &p).is_err());
        }
    }
}
