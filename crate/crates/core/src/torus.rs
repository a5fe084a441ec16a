//! Finite node sets on the periodic unit cube `𝕋^d = ℝ^d / ℤ^d`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Consecutive rejections after which random generation gives up.
pub const MAX_REJECTIONS: usize = 1_000_000;

/// A finite point set on `𝕋^d` with coordinates in `[0, 1)`.
///
/// Coincident points are allowed so that degenerate configurations can be
/// analysed; their separation is zero.
#[derive(Clone, Debug)]
pub struct NodeSet {
    dim: usize,
    coords: Vec<f64>,
    separation: OnceLock<f64>,
}

#[derive(Serialize, Deserialize)]
struct NodeSetDoc {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PartialEq for NodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.coords == other.coords
    }
}

impl NodeSet {
    /// Build a node set, rejecting coordinates outside `[0, 1)`.
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Domain(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            for &x in p {
                if !(0.0..1.0).contains(&x) {
                    return Err(Error::Domain(format!(
                        "coordinate {x} of point {i} is outside [0, 1)"
                    )));
                }
            }
            coords.extend_from_slice(p);
        }
        Ok(Self::from_coords(dim, coords))
    }

    /// Build a node set after reducing every coordinate modulo 1.
    pub fn wrapped(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let points = points
            .into_iter()
            .map(|p| p.into_iter().map(wrap_unit).collect())
            .collect();
        Self::new(dim, points)
    }

    fn from_coords(dim: usize, coords: Vec<f64>) -> Self {
        Self {
            dim,
            coords,
            separation: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Minimal wrap-around distance between distinct points.
    pub fn separation(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::Domain(format!(
                "separation needs at least two points, got {}",
                self.len()
            )));
        }
        Ok(*self.separation.get_or_init(|| {
            let mut best = f64::INFINITY;
            for i in 0..self.len() {
                for j in 0..i {
                    best = best.min(wrap_distance(self.point(i), self.point(j)));
                }
            }
            best
        }))
    }

    /// Common translation of all points by `shift` (mod 1).
    pub fn translated(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.dim {
            return Err(Error::Domain("shift dimension mismatch".into()));
        }
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(shift).map(|(x, s)| wrap_unit(x + s)))
            .collect();
        Ok(Self::from_coords(self.dim, coords))
    }

    pub fn to_json(&self) -> String {
        let doc = NodeSetDoc {
            dim: self.dim,
            points: self.points().map(<[f64]>::to_vec).collect(),
        };
        serde_json::to_string(&doc).expect("node sets serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NodeSetDoc = serde_json::from_str(text)?;
        Self::new(doc.dim, doc.points)
    }
}

impl Serialize for NodeSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NodeSetDoc {
            dim: self.dim,
            points: self.points().map(<[f64]>::to_vec).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NodeSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = NodeSetDoc::deserialize(deserializer)?;
        NodeSet::new(doc.dim, doc.points).map_err(serde::de::Error::custom)
    }
}

/// Reduce `x` into `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs.
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Wrap-around Euclidean distance `min_ℓ ‖a − b + ℓ‖₂` over `ℓ ∈ ℤ^d`.
///
/// The minimum over shifts separates across coordinates, and for
/// coordinates in `[0, 1)` each one is attained at `ℓ_i ∈ {-1, 0, 1}`.
pub fn wrap_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).abs();
            let d = d.min(1.0 - d);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn unit_ball_volume(dim: usize) -> f64 {
    // Γ(d/2 + 1) by the half-integer recursion.
    let half = dim as f64 / 2.0;
    let mut gamma = if dim % 2 == 0 { 1.0 } else { PI.sqrt() / 2.0 };
    let mut x = if dim % 2 == 0 { 1.0 } else { 1.5 };
    while x < half + 1.0 - 1e-12 {
        gamma *= x;
        x += 1.0;
    }
    PI.powf(half) / gamma
}

/// Heuristic packing density `count · vol(B_{q/2})` used to judge whether
/// rejection sampling is likely to terminate quickly (values up to 0.5).
pub fn packing_density(dim: usize, q: f64, count: usize) -> f64 {
    count as f64 * unit_ball_volume(dim) * (q / 2.0).powi(dim as i32)
}

fn rejection_fill(
    rng: &mut ChaCha8Rng,
    dim: usize,
    q: f64,
    count: usize,
    coords: &mut Vec<f64>,
) -> Result<()> {
    let mut rejections = 0;
    let mut candidate = vec![0.0; dim];
    while coords.len() < count * dim {
        for c in candidate.iter_mut() {
            *c = rng.random::<f64>();
        }
        let ok = coords
            .chunks_exact(dim)
            .all(|p| wrap_distance(p, &candidate) >= q);
        if ok {
            coords.extend_from_slice(&candidate);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(Error::Infeasible(format!(
                    "{MAX_REJECTIONS} consecutive rejections placing {count} points at separation {q} in d={dim}"
                )));
            }
        }
    }
    Ok(())
}

fn check_generator_args(dim: usize, q: f64, count: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Domain(format!("separation must be positive, got {q}")));
    }
    if count >= 2 && q > (dim as f64).sqrt() / 2.0 {
        return Err(Error::Infeasible(format!(
            "separation {q} exceeds the torus half-diameter {}",
            (dim as f64).sqrt() / 2.0
        )));
    }
    Ok(())
}

/// `count` uniformly random points with pairwise wrap distance at least `q`.
///
/// Rejection sampling; deterministic in `seed`. Terminates quickly when
/// [`packing_density`] is at most about 0.5.
pub fn gen_random_separated(dim: usize, q: f64, count: usize, seed: u64) -> Result<NodeSet> {
    check_generator_args(dim, q, count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(dim * count);
    rejection_fill(&mut rng, dim, q, count, &mut coords)?;
    Ok(NodeSet::from_coords(dim, coords))
}

/// Like [`gen_random_separated`], but the first two points are placed at
/// wrap distance exactly `q`, so the separation equals `q`.
pub fn gen_random_at_separation(dim: usize, q: f64, count: usize, seed: u64) -> Result<NodeSet> {
    check_generator_args(dim, q, count)?;
    if count < 2 {
        return gen_random_separated(dim, q, count, seed);
    }
    if q > 0.5 {
        return Err(Error::Infeasible(format!(
            "an exact pair distance {q} > 1/2 is not realisable on the torus"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    let dir: Vec<f64> = loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            break v.into_iter().map(|x| x / norm).collect();
        }
    };
    let second: Vec<f64> = first
        .iter()
        .zip(&dir)
        .map(|(x, u)| wrap_unit(x + q * u))
        .collect();
    let mut coords = Vec::with_capacity(dim * count);
    coords.extend_from_slice(&first);
    coords.extend_from_slice(&second);
    // The pair realises q only up to rounding; reject against a hair less.
    let accept = q * (1.0 - 1e-12);
    rejection_fill(&mut rng, dim, accept, count, &mut coords)?;
    Ok(NodeSet::from_coords(dim, coords))
}

/// Points of the hexagonal lattice spanned by `(s, 0)` and
/// `(s/2, s·√3/2)`, anchored at `(1/4, 1/4)`.
///
/// Lattice points are visited in order of distance from the anchor (ties
/// broken by angle) and kept when their wrap distance to every kept point is
/// at least `s(1 − 1e−9)`, until `max_points` are collected.
pub fn gen_hex_lattice(spacing: f64, max_points: usize) -> Result<NodeSet> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::Domain(format!("spacing must be positive, got {spacing}")));
    }
    if spacing > 0.5 && max_points >= 2 {
        return Err(Error::Infeasible(format!(
            "spacing {spacing} exceeds the torus half-width 1/2"
        )));
    }
    let anchor = [0.25, 0.25];
    let e1 = [spacing, 0.0];
    let e2 = [0.5 * spacing, 0.5 * 3f64.sqrt() * spacing];
    // Every lattice point of the unit cell lies within √2 of the anchor.
    let reach = 2f64.sqrt() + spacing;
    let span = (reach / (0.5 * 3f64.sqrt() * spacing)).ceil() as i64 + 1;
    let mut candidates = Vec::new();
    for b in -span..=span {
        for a in -2 * span..=2 * span {
            let x = a as f64 * e1[0] + b as f64 * e2[0];
            let y = a as f64 * e1[1] + b as f64 * e2[1];
            let r = x.hypot(y);
            if r <= reach {
                candidates.push((r, y.atan2(x), [x, y]));
            }
        }
    }
    candidates.sort_by(|p, q| {
        p.0.partial_cmp(&q.0)
            .unwrap()
            .then(p.1.partial_cmp(&q.1).unwrap())
    });
    let threshold = spacing * (1.0 - 1e-9);
    let mut coords: Vec<f64> = Vec::with_capacity(2 * max_points);
    for (_, _, offset) in candidates {
        if coords.len() >= 2 * max_points {
            break;
        }
        let p = [wrap_unit(anchor[0] + offset[0]), wrap_unit(anchor[1] + offset[1])];
        if coords
            .chunks_exact(2)
            .all(|k| wrap_distance(k, &p) >= threshold)
        {
            coords.extend_from_slice(&p);
        }
    }
    if coords.len() < 2 * max_points {
        return Err(Error::Infeasible(format!(
            "only {} hexagonal lattice points with spacing {spacing} fit on the torus, {max_points} requested",
            coords.len() / 2
        )));
    }
    Ok(NodeSet::from_coords(2, coords))
}

/// Points of the cubic lattice `s·ℤ^d` anchored at `(1/4, …, 1/4)`,
/// selected like [`gen_hex_lattice`]: nearest to the anchor first (ties in
/// lexicographic order), keeping those at wrap distance at least
/// `s(1 − 1e−9)` from every kept point.
pub fn gen_cubic_patch(dim: usize, spacing: f64, max_points: usize) -> Result<NodeSet> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::Domain(format!("spacing must be positive, got {spacing}")));
    }
    if spacing > 0.5 && max_points >= 2 {
        return Err(Error::Infeasible(format!(
            "spacing {spacing} exceeds the torus half-width 1/2"
        )));
    }
    let span = (1.0 / spacing).ceil() as i64;
    let side = (2 * span + 1) as usize;
    let mut candidates = Vec::new();
    for code in 0..side.pow(dim as u32) {
        let mut rest = code;
        let mut offset = vec![0.0; dim];
        for o in offset.iter_mut().rev() {
            *o = ((rest % side) as i64 - span) as f64 * spacing;
            rest /= side;
        }
        let r = offset.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r <= (dim as f64).sqrt() + spacing {
            candidates.push((r, code, offset));
        }
    }
    candidates.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
    let threshold = spacing * (1.0 - 1e-9);
    let mut coords: Vec<f64> = Vec::with_capacity(dim * max_points);
    for (_, _, offset) in candidates {
        if coords.len() >= dim * max_points {
            break;
        }
        let p: Vec<f64> = offset.iter().map(|o| wrap_unit(0.25 + o)).collect();
        if coords
            .chunks_exact(dim)
            .all(|k| wrap_distance(k, &p) >= threshold)
        {
            coords.extend_from_slice(&p);
        }
    }
    if coords.len() < dim * max_points {
        return Err(Error::Infeasible(format!(
            "only {} cubic lattice points with spacing {spacing} fit on the torus, {max_points} requested",
            coords.len() / dim
        )));
    }
    Ok(NodeSet::from_coords(dim, coords))
}

/// The uniform grid `{0, 1/m, …, (m−1)/m}^d` in lexicographic order.
pub fn gen_grid(dim: usize, per_axis: usize) -> Result<NodeSet> {
    if dim == 0 || per_axis == 0 {
        return Err(Error::Domain("grid needs dim ≥ 1 and per_axis ≥ 1".into()));
    }
    let total = per_axis.pow(dim as u32);
    let mut coords = Vec::with_capacity(total * dim);
    for idx in 0..total {
        let mut digits = vec![0usize; dim];
        let mut rest = idx;
        for slot in digits.iter_mut().rev() {
            *slot = rest % per_axis;
            rest /= per_axis;
        }
        coords.extend(digits.into_iter().map(|k| k as f64 / per_axis as f64));
    }
    Ok(NodeSet::from_coords(dim, coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force_separation(set: &NodeSet) -> f64 {
        let d = set.dim();
        let mut best = f64::INFINITY;
        for i in 0..set.len() {
            for j in 0..i {
                for code in 0..3usize.pow(d as u32) {
                    let mut c = code;
                    let mut sq = 0.0;
                    for s in 0..d {
                        let shift = (c % 3) as f64 - 1.0;
                        c /= 3;
                        let diff = set.point(i)[s] - set.point(j)[s] + shift;
                        sq += diff * diff;
                    }
                    best = best.min(sq.sqrt());
                }
            }
        }
        best
    }

    #[test]
    fn separation_examples() {
        let s = NodeSet::new(1, vec![vec![0.0], vec![0.5]]).unwrap();
        assert_eq!(s.separation().unwrap(), 0.5);
        let s = NodeSet::new(1, vec![vec![0.1], vec![0.9]]).unwrap();
        assert!((s.separation().unwrap() - 0.2).abs() < 1e-15);
        let s = NodeSet::new(2, vec![vec![0.0, 0.0], vec![0.5, 0.5], vec![0.5, 0.0]]).unwrap();
        assert_eq!(s.separation().unwrap(), brute_force_separation(&s));
        assert_eq!(s.separation().unwrap(), 0.5);
    }

    #[test]
    fn separation_needs_two_points() {
        let s = NodeSet::new(2, vec![vec![0.1, 0.2]]).unwrap();
        assert!(matches!(s.separation(), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_out_of_range_coordinates() {
        assert!(NodeSet::new(1, vec![vec![1.0]]).is_err());
        assert!(NodeSet::new(1, vec![vec![-0.1]]).is_err());
        assert!(NodeSet::new(2, vec![vec![0.1]]).is_err());
        let w = NodeSet::wrapped(1, vec![vec![1.25], vec![-0.25]]).unwrap();
        assert_eq!(w.point(0), &[0.25]);
        assert_eq!(w.point(1), &[0.75]);
    }

    #[test]
    fn random_separated_examples() {
        let s = gen_random_separated(1, 0.4, 2, 7).unwrap();
        assert!(s.separation().unwrap() >= 0.4);
        let s = gen_random_separated(2, 0.3, 3, 7).unwrap();
        assert!(s.separation().unwrap() >= 0.3);
        assert!(s.points().flatten().all(|x| (0.0..1.0).contains(x)));
        assert!(matches!(
            gen_random_separated(1, 0.6, 2, 7),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn random_generation_is_deterministic() {
        let a = gen_random_separated(2, 0.1, 10, 42).unwrap();
        let b = gen_random_separated(2, 0.1, 10, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_separation_generator() {
        for seed in 0..50 {
            let s = gen_random_at_separation(2, 0.12, 8, seed).unwrap();
            assert_eq!(s.len(), 8);
            assert!((s.separation().unwrap() - 0.12).abs() < 1e-12);
        }
    }

    #[test]
    fn random_separated_property_over_seeds() {
        for seed in 0..100 {
            let s = gen_random_separated(2, 0.15, 12, seed).unwrap();
            assert!(s.separation().unwrap() >= 0.15);
        }
    }

    #[test]
    fn hex_examples() {
        let s = gen_hex_lattice(0.25, 2).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.separation().unwrap() - 0.25).abs() < 1e-12);
        let s = gen_hex_lattice(0.2, 7).unwrap();
        assert!((s.separation().unwrap() - 0.2).abs() < 1e-9);
        assert!(matches!(gen_hex_lattice(0.6, 2), Err(Error::Infeasible(_))));
    }

    #[test]
    fn hex_points_have_lattice_neighbours() {
        for (spacing, count) in [(0.05, 19), (0.045, 37), (0.2, 12), (0.1, 30)] {
            let s = gen_hex_lattice(spacing, count).unwrap();
            assert_eq!(s.len(), count);
            for i in 0..s.len() {
                let nearest = (0..s.len())
                    .filter(|&j| j != i)
                    .map(|j| wrap_distance(s.point(i), s.point(j)))
                    .fold(f64::INFINITY, f64::min);
                assert!((nearest - spacing).abs() < 1e-9, "point {i}: {nearest}");
            }
        }
    }

    #[test]
    fn hex_runs_out_of_room() {
        assert!(matches!(gen_hex_lattice(0.3, 50), Err(Error::Infeasible(_))));
    }

    #[test]
    fn cubic_patch_examples() {
        let s = gen_cubic_patch(1, 0.1, 5).unwrap();
        assert_eq!(s.len(), 5);
        assert!((s.separation().unwrap() - 0.1).abs() < 1e-12);
        for (dim, spacing, count) in [(2, 0.07, 19), (3, 0.1, 27), (2, 0.25, 16)] {
            let s = gen_cubic_patch(dim, spacing, count).unwrap();
            assert_eq!(s.len(), count);
            assert!((s.separation().unwrap() - spacing).abs() < 1e-9);
        }
        assert!(matches!(gen_cubic_patch(2, 0.3, 10), Err(Error::Infeasible(_))));
        assert!(matches!(gen_cubic_patch(2, 0.0, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn grid_examples() {
        let g = gen_grid(1, 4).unwrap();
        let xs: Vec<f64> = g.points().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75]);
        assert_eq!(g.separation().unwrap(), 0.25);
        let g = gen_grid(2, 2).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.separation().unwrap(), 0.5);
        let g = gen_grid(1, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.point(0), &[0.0]);
    }

    #[test]
    fn json_round_trip() {
        let s = gen_random_separated(3, 0.2, 5, 1).unwrap();
        let back = NodeSet::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);
        let parsed = NodeSet::from_json(r#"{"dim": 2, "points": [[0.1, 0.2], [0.5, 0.75]]}"#).unwrap();
        assert_eq!(parsed.point(1), &[0.5, 0.75]);
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    fn arb_set() -> impl Strategy<Value = NodeSet> {
        (1usize..=3, 2usize..8).prop_flat_map(|(d, n)| {
            proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, d), n)
                .prop_map(move |pts| NodeSet::new(d, pts).unwrap())
        })
    }

    proptest! {
        #[test]
        fn separation_matches_shift_enumeration(set in arb_set()) {
            prop_assert!((set.separation().unwrap() - brute_force_separation(&set)).abs() < 1e-12);
        }

        #[test]
        fn separation_invariances(set in arb_set(), shift in proptest::collection::vec(-2.0f64..2.0, 3)) {
            let d = set.dim();
            let sep = set.separation().unwrap();
            let moved = set.translated(&shift[..d]).unwrap();
            prop_assert!((moved.separation().unwrap() - sep).abs() < 1e-12);

            let reflected = NodeSet::wrapped(d, set.points().map(|p| p.iter().map(|x| 1.0 - x).collect()).collect()).unwrap();
            prop_assert!((reflected.separation().unwrap() - sep).abs() < 1e-12);

            let permuted = NodeSet::new(d, set.points().map(|p| p.iter().rev().copied().collect()).collect()).unwrap();
            prop_assert!((permuted.separation().unwrap() - sep).abs() < 1e-12);
        }
    }
}
