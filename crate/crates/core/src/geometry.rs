//! Distances and centroids.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Euclidean,
    /// Angle between the two vectors, in `[0, pi]`.
    Angle,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 2] = [Self::Angle, Self::Euclidean];

    pub fn name(self) -> &'static str {
        match self {
            Self::Euclidean => "euclidean",
            Self::Angle => "angle",
        }
    }

    /// Distance without the dimension check; callers guarantee equal lengths.
    #[inline]
    pub fn eval(self, x: &[f64], c: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), c.len());
        match self {
            Self::Euclidean => libm::sqrt(squared_euclidean(x, c)),
            Self::Angle => {
                let (mut dot, mut xx, mut cc) = (0.0, 0.0, 0.0);
                for (a, b) in x.iter().zip(c) {
                    dot += a * b;
                    xx += a * a;
                    cc += b * b;
                }
                if xx == 0.0 || cc == 0.0 {
                    // zero vectors have no direction
                    return FRAC_PI_2;
                }
                libm::acos((dot / libm::sqrt(xx * cc)).clamp(-1.0, 1.0))
            }
        }
    }
}

#[inline]
pub fn squared_euclidean(x: &[f64], c: &[f64]) -> f64 {
    x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub fn distance(kind: DistanceKind, x: &[f64], c: &[f64]) -> Result<f64> {
    if x.len() != c.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: c.len() });
    }
    Ok(kind.eval(x, c))
}

/// Coordinate-wise arithmetic mean.
pub fn centroid<'a, I>(points: I) -> Result<Vec<f64>>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut it = points.into_iter();
    let first = it.next().ok_or(Error::Empty("point set"))?;
    let mut sum = first.to_vec();
    let mut n = 1usize;
    for p in it {
        if p.len() != sum.len() {
            return Err(Error::DimensionMismatch { expected: sum.len(), found: p.len() });
        }
        for (s, v) in sum.iter_mut().zip(p) {
            *s += v;
        }
        n += 1;
    }
    let n = n as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    Ok(sum)
}

/// Index of the closest reference and its distance. Ties go to the lowest index.
pub fn nearest_reference<'a, I>(kind: DistanceKind, x: &[f64], refs: I) -> Result<(usize, f64)>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut best: Option<(usize, f64)> = None;
    for (i, r) in refs.into_iter().enumerate() {
        let d = distance(kind, x, r)?;
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.ok_or(Error::Empty("reference set"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    #[test]
    fn distance_examples() {
        assert_eq!(distance(DistanceKind::Euclidean, &[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert_eq!(distance(DistanceKind::Euclidean, &[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(distance(DistanceKind::Angle, &[1.0, 0.0], &[0.0, 1.0]).unwrap(), FRAC_PI_2);
        assert_eq!(distance(DistanceKind::Angle, &[1.0, 0.0], &[-2.0, 0.0]).unwrap(), PI);
        assert_eq!(distance(DistanceKind::Angle, &[0.0, 0.0], &[1.0, 1.0]).unwrap(), FRAC_PI_2);
        assert_eq!(
            distance(DistanceKind::Euclidean, &[0.0], &[0.0, 1.0]).unwrap_err(),
            Error::DimensionMismatch { expected: 1, found: 2 }
        );
    }

    #[test]
    fn centroid_examples() {
        let pts = [vec![0.0, 0.0], vec![2.0, 2.0]];
        assert_eq!(centroid(pts.iter().map(|p| p.as_slice())).unwrap(), [1.0, 1.0]);
        assert_eq!(centroid([&[3.5, -1.0][..]]).unwrap(), [3.5, -1.0]);
        let tri = [vec![0.0, 0.0], vec![0.0, 3.0], vec![3.0, 0.0]];
        assert_eq!(centroid(tri.iter().map(|p| p.as_slice())).unwrap(), [1.0, 1.0]);
        assert_eq!(centroid(core::iter::empty::<&[f64]>()).unwrap_err(), Error::Empty("point set"));
    }

    #[test]
    fn nearest_reference_examples() {
        let refs = [vec![5.0, 5.0], vec![1.0, 0.0], vec![2.0, 3.0]];
        let it = || refs.iter().map(|r| r.as_slice());
        assert_eq!(nearest_reference(DistanceKind::Euclidean, &[2.0, 3.0], it()).unwrap(), (2, 0.0));
        let tie = [vec![1.0, 0.0], vec![-1.0, 0.0]];
        let (i, _) = nearest_reference(DistanceKind::Euclidean, &[0.0, 0.0], tie.iter().map(|r| r.as_slice())).unwrap();
        assert_eq!(i, 0);
        let refs = [vec![3.0, 4.0], vec![1.0, 1.0]];
        let (i, d) = nearest_reference(DistanceKind::Euclidean, &[0.0, 0.0], refs.iter().map(|r| r.as_slice())).unwrap();
        assert_eq!((i, d), (1, libm::sqrt(2.0)));
        assert!(nearest_reference(DistanceKind::Angle, &[1.0], core::iter::empty::<&[f64]>()).is_err());
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-100.0f64..100.0, 3)
    }

    fn unit(v: &[f64]) -> Vec<f64> {
        let n = libm::sqrt(v.iter().map(|a| a * a).sum::<f64>());
        v.iter().map(|a| a / n).collect()
    }

    proptest! {
        #[test]
        fn symmetric_and_reflexive(x in vec3(), y in vec3()) {
            for k in DistanceKind::ALL {
                prop_assert_eq!(k.eval(&x, &y), k.eval(&y, &x));
            }
            prop_assert_eq!(DistanceKind::Euclidean.eval(&x, &x), 0.0);
            prop_assume!(x.iter().any(|&v| v != 0.0));
            prop_assert_eq!(DistanceKind::Angle.eval(&x, &x), 0.0);
        }

        #[test]
        fn triangle_inequality(x in vec3(), y in vec3(), z in vec3()) {
            let e = DistanceKind::Euclidean;
            prop_assert!(e.eval(&x, &z) <= e.eval(&x, &y) + e.eval(&y, &z) + 1e-9);
            prop_assume!([&x, &y, &z].iter().all(|v| v.iter().any(|&a| a.abs() > 1e-3)));
            let (x, y, z) = (unit(&x), unit(&y), unit(&z));
            let a = DistanceKind::Angle;
            prop_assert!(a.eval(&x, &z) <= a.eval(&x, &y) + a.eval(&y, &z) + 1e-9);
        }

        #[test]
        fn centroid_of_copies(v in vec3(), n in 1usize..20) {
            let copies = vec![v.clone(); n];
            let c = centroid(copies.iter().map(|p| p.as_slice())).unwrap();
            for (a, b) in c.iter().zip(&v) {
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }
}
