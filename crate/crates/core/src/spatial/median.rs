use super::{check_odd_window, neighborhood, per_pixel};
use crate::error::Result;
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MedianParams {
    /// Side of the square window; must be odd.
    pub window: usize,
}

impl Default for MedianParams {
    fn default() -> Self {
        Self { window: 3 }
    }
}

/// Replaces each pixel with the middle element of its sorted neighbourhood.
pub fn median_filter(img: &GrayImage, p: &MedianParams) -> Result<GrayImage> {
    check_odd_window(p.window)?;
    let half = p.window / 2;
    let mid = p.window * p.window / 2;
    Ok(per_pixel(img, |r, c| {
        let mut buf = Vec::with_capacity(p.window * p.window);
        neighborhood(img, r, c, half, &mut buf);
        *buf.select_nth_unstable_by(mid, f64::total_cmp).1
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_impulse() {
        let img = GrayImage::filled(9, 7, 42.0).unwrap();
        assert_eq!(
            median_filter(&img, &MedianParams { window: 5 }).unwrap(),
            img
        );

        let mut data = vec![0.0; 49];
        data[24] = 255.0;
        let img = GrayImage::new(7, 7, data).unwrap();
        let out = median_filter(&img, &MedianParams { window: 3 }).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn even_window_rejected() {
        let img = GrayImage::filled(4, 4, 0.0).unwrap();
        assert!(median_filter(&img, &MedianParams { window: 4 }).is_err());
        assert!(median_filter(&img, &MedianParams { window: 1 }).is_err());
    }

    #[test]
    fn borders_replicate() {
        // 1x3 image: the left pixel sees [1,1,2] in each of the 3 rows
        let img = GrayImage::new(3, 1, vec![1.0, 2.0, 9.0]).unwrap();
        let out = median_filter(&img, &MedianParams { window: 3 }).unwrap();
        assert_eq!(out.data(), &[1.0, 2.0, 9.0]);
    }
}
