//! Exact low-dimensional oracles, independent of the library's solver:
//! monotone-chain hulls and point-to-polygon geometry in the plane, interval
//! order statistics on the line. Everything here is brute force on purpose.

#![allow(dead_code)]

pub type P2 = (f64, f64);

fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull, counter-clockwise, via the monotone chain; collinear input
/// degenerates to 2 (segment) or 1 (point) vertices.
pub fn convex_hull_2d(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn dot(a: P2, b: P2) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

fn segment_distance(a: P2, b: P2, q: P2) -> f64 {
    let ab = (b.0 - a.0, b.1 - a.1);
    let aq = (q.0 - a.0, q.1 - a.1);
    let len_sq = dot(ab, ab);
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (dot(aq, ab) / len_sq).clamp(0.0, 1.0)
    };
    let c = (a.0 + t * ab.0, a.1 + t * ab.1);
    ((q.0 - c.0).powi(2) + (q.1 - c.1).powi(2)).sqrt()
}

/// Exact planar membership: is q in the hull, and how far is q from the hull
/// boundary (measured on whichever side it lies)?
#[derive(Debug, Clone, Copy)]
pub struct PlanarVerdict {
    pub inside: bool,
    /// Distance from q to the hull boundary; for outside queries this equals
    /// the distance to the hull itself.
    pub boundary_distance: f64,
}

pub fn planar_membership(points: &[P2], q: P2) -> PlanarVerdict {
    let hull = convex_hull_2d(points);
    match hull.len() {
        0 => panic!("empty point set"),
        1 => {
            let d = ((q.0 - hull[0].0).powi(2) + (q.1 - hull[0].1).powi(2)).sqrt();
            PlanarVerdict {
                inside: d == 0.0,
                boundary_distance: d,
            }
        }
        2 => {
            let d = segment_distance(hull[0], hull[1], q);
            PlanarVerdict {
                inside: d == 0.0,
                boundary_distance: d,
            }
        }
        n => {
            let mut inside = true;
            let mut min_edge = f64::INFINITY;
            for i in 0..n {
                let a = hull[i];
                let b = hull[(i + 1) % n];
                if cross(a, b, q) < 0.0 {
                    inside = false;
                }
                min_edge = min_edge.min(segment_distance(a, b, q));
            }
            PlanarVerdict {
                inside,
                boundary_distance: min_edge,
            }
        }
    }
}

/// d = 1 oracle: hull is [min, max]; distance is the gap outside it.
pub fn interval_membership(values: &[f64], q: f64) -> (bool, f64) {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if q < lo {
        (false, lo - q)
    } else if q > hi {
        (false, q - hi)
    } else {
        (true, (q - lo).min(hi - q))
    }
}

/// Exact planar convex-position check: every point a hull vertex.
pub fn planar_convex_position(points: &[P2]) -> bool {
    points.iter().all(|&p| {
        let others: Vec<P2> = points.iter().cloned().filter(|&o| o != p).collect();
        !planar_membership(&others, p).inside
    })
}

// ---------------------------------------------------------------------------
// synthetic byte-image corpus standing in for real image data

/// Smooth rank-6 signal in [0,255] plus independent per-pixel jitter: the
/// low signal rank keeps small-dimension hull fractions high, while the
/// jitter collapses them once the kept dimension passes the signal rank.
pub fn synthetic_images(n: usize, h: usize, w: usize, seed: u64) -> ndarray::Array3<u8> {
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};
    let bases: [fn(f64, f64) -> f64; 6] = [
        |u, _| (std::f64::consts::PI * u).sin(),
        |_, v| (std::f64::consts::PI * v).sin(),
        |u, v| (std::f64::consts::PI * u).cos() * (std::f64::consts::PI * v).cos(),
        |u, v| (2.0 * std::f64::consts::PI * u).sin() * (std::f64::consts::PI * v).sin(),
        |u, v| (std::f64::consts::PI * u).sin() * (2.0 * std::f64::consts::PI * v).cos(),
        |u, v| u * v,
    ];
    let mut out = ndarray::Array3::zeros((n, h, w));
    for i in 0..n {
        let mut rng = hullscope::rng::trial_rng(seed, i as u64);
        let z: Vec<f64> = (0..bases.len())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        for r in 0..h {
            for c in 0..w {
                let u = r as f64 / (h - 1).max(1) as f64;
                let v = c as f64 / (w - 1).max(1) as f64;
                let signal: f64 = bases.iter().zip(&z).map(|(b, zk)| zk * b(u, v)).sum();
                let jitter = rng.random_range(-6.0..=6.0);
                out[(i, r, c)] = (128.0 + 34.0 * signal + jitter).clamp(0.0, 255.0).round() as u8;
            }
        }
    }
    out
}

pub fn synthetic_dataset(
    n_train: usize,
    n_test: usize,
    h: usize,
    w: usize,
) -> hullscope::pipeline::ImageDataset {
    use ndarray::Axis;
    let train = synthetic_images(n_train, h, w, 0xDA7A_0001);
    let test = synthetic_images(n_test, h, w, 0xDA7A_0002);
    hullscope::pipeline::ImageDataset::new(
        "synthetic",
        train.insert_axis(Axis(3)),
        vec![0; n_train],
        test.insert_axis(Axis(3)),
        vec![0; n_test],
    )
    .expect("matching shapes by construction")
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn hull_of_square_plus_center() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)];
        let hull = convex_hull_2d(&pts);
        assert_eq!(hull.len(), 4);
        assert!(!hull.contains(&(0.5, 0.5)));
    }

    #[test]
    fn membership_on_square() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let v = planar_membership(&pts, (0.5, 0.5));
        assert!(v.inside);
        assert!((v.boundary_distance - 0.5).abs() < 1e-15);
        let v = planar_membership(&pts, (2.0, 0.5));
        assert!(!v.inside);
        assert!((v.boundary_distance - 1.0).abs() < 1e-15);
        let v = planar_membership(&pts, (2.0, 2.0));
        assert!((v.boundary_distance - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn collinear_degenerates_to_segment() {
        let pts = [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)];
        let hull = convex_hull_2d(&pts);
        assert_eq!(hull.len(), 2);
        let v = planar_membership(&pts, (3.0, 3.0));
        assert!(!v.inside);
        assert!((v.boundary_distance - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn interval_oracle() {
        let vals = [0.3, -1.0, 2.0];
        assert_eq!(interval_membership(&vals, 0.0), (true, 1.0));
        assert_eq!(interval_membership(&vals, -3.0), (false, 2.0));
        assert_eq!(interval_membership(&vals, 2.5), (false, 0.5));
    }

    #[test]
    fn convex_position_oracle() {
        assert!(planar_convex_position(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0)
        ]));
        assert!(!planar_convex_position(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.4, 0.4)
        ]));
    }
}
