//! Brute-force reference oracles for the geometry layer. Test-only
//! machinery: exhaustive searches over small boxes, deliberately
//! duplicating none of the algebraic shortcuts of the code they check.
//!
//! All oracles are desk-scale and guard their bounds explicitly.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use super::HarnessError;
use crate::lattice::{BasicSet, Hyperplane, Int, IntVec, Rat};
use crate::learners::Datum;

const MAX_RADIUS: i64 = 20;
const MAX_LOCK_POINTS: usize = 12;
const MAX_BOX_POINTS: i64 = 40_000_000;

fn to_i64s(v: &IntVec) -> Result<Vec<i64>, HarnessError> {
    v.coords()
        .iter()
        .map(|c| c.to_i64())
        .collect::<Option<Vec<i64>>>()
        .ok_or(HarnessError::BoundsExceeded("coordinates beyond i64"))
}

fn for_each_box(dim: usize, radius: i64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    fn rec(coords: &mut Vec<i64>, dim: usize, radius: i64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if coords.len() == dim {
            return f(coords);
        }
        for v in -radius..=radius {
            coords.push(v);
            let go_on = rec(coords, dim, radius, f);
            coords.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(&mut Vec::new(), dim, radius, f)
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

/// Squared distance between the closest distinct parallel hyperplanes with
/// the given normal through lattice points, found by enumerating the
/// values `normal . x` over the box of the given radius and taking the
/// smallest positive gap.
pub fn gap_oracle(normal: &IntVec, radius: i64) -> Result<Rat, HarnessError> {
    if radius > MAX_RADIUS {
        return Err(HarnessError::BoundsExceeded("gap oracle radius"));
    }
    let n = to_i64s(normal)?;
    let mut values: BTreeSet<i128> = BTreeSet::new();
    for_each_box(n.len(), radius, &mut |p| {
        values.insert(dot(&n, p));
        true
    });
    let mut min_gap: Option<i128> = None;
    let mut prev: Option<i128> = None;
    for v in values {
        if let Some(p) = prev {
            let gap = v - p;
            if min_gap.map(|m| gap < m).unwrap_or(true) {
                min_gap = Some(gap);
            }
        }
        prev = Some(v);
    }
    let gap = min_gap.ok_or(HarnessError::BoundsExceeded("box too small for a gap"))?;
    // distance = gap / |normal|, squared and exact
    let gap = Int::from(gap);
    Ok(Rat::new(&gap * &gap, normal.norm_sq()))
}

/// Smallest axis-aligned distance from a lattice point off the hyperplane
/// to it, searched over the box, together with whether points achieving it
/// exist on both sides. `None` when the plane never varies along the axis.
pub fn jdist_oracle(
    h: &Hyperplane,
    axis: usize,
    radius: i64,
) -> Result<Option<(Rat, bool)>, HarnessError> {
    if radius > MAX_RADIUS {
        return Err(HarnessError::BoundsExceeded("jdist oracle radius"));
    }
    if !h.offset().is_integer() {
        return Err(HarnessError::BoundsExceeded(
            "jdist oracle needs an integer offset",
        ));
    }
    let n = to_i64s(h.normal())?;
    let a0 = h
        .offset()
        .to_integer()
        .to_i64()
        .ok_or(HarnessError::BoundsExceeded("offset beyond i64"))?;
    if n[axis] == 0 {
        return Ok(None);
    }
    // the axis distance of p is |n.p + a0| / |n_axis|
    let mut best: Option<i128> = None;
    let mut above = false;
    let mut below = false;
    for_each_box(n.len(), radius, &mut |p| {
        let v = dot(&n, p) + a0 as i128;
        if v == 0 {
            return true;
        }
        let mag = v.abs();
        if best.map(|b| mag < b).unwrap_or(true) {
            best = Some(mag);
            above = v > 0;
            below = v < 0;
        } else if best == Some(mag) {
            above |= v > 0;
            below |= v < 0;
        }
        true
    });
    let mag = best.ok_or(HarnessError::BoundsExceeded("box holds no off-plane point"))?;
    Ok(Some((
        Rat::new(Int::from(mag), Int::from(n[axis].abs())),
        above && below,
    )))
}

/// Primitive sign-normalized normal of the affine span of `points`
/// (dimension 2 or 3), via the direct cross-product formulas; `None` for
/// degenerate inputs.
fn plane_normal(points: &[Vec<i64>]) -> Option<Vec<i64>> {
    let raw: Vec<i128> = match points.len() {
        2 => {
            let d = [points[1][0] - points[0][0], points[1][1] - points[0][1]];
            alloc::vec![d[1] as i128, -(d[0] as i128)]
        }
        3 => {
            let u: Vec<i128> = (0..3)
                .map(|k| (points[1][k] - points[0][k]) as i128)
                .collect();
            let w: Vec<i128> = (0..3)
                .map(|k| (points[2][k] - points[0][k]) as i128)
                .collect();
            alloc::vec![
                u[1] * w[2] - u[2] * w[1],
                u[2] * w[0] - u[0] * w[2],
                u[0] * w[1] - u[1] * w[0],
            ]
        }
        _ => return None,
    };
    if raw.iter().all(|c| *c == 0) {
        return None;
    }
    let g = raw.iter().fold(0i128, |acc, c| {
        use num_integer::Integer;
        acc.gcd(&c.abs())
    });
    let mut n: Vec<i64> = raw.iter().map(|c| (c / g) as i64).collect();
    if n.iter().find(|c| **c != 0).map(|c| *c < 0).unwrap_or(false) {
        for c in n.iter_mut() {
            *c = -*c;
        }
    }
    Some(n)
}

/// Exact sign of the 2-D cross product (b - a) x (c - a).
fn orient2(a: &[Rat; 2], b: &[Rat; 2], c: &[Rat; 2]) -> i8 {
    let v = (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn point_in_triangle(p: &[Rat; 2], t: &[[Rat; 2]; 3]) -> bool {
    let s0 = orient2(&t[0], &t[1], p);
    let s1 = orient2(&t[1], &t[2], p);
    let s2 = orient2(&t[2], &t[0], p);
    (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0)
}

fn on_segment(p: &[Rat; 2], a: &[Rat; 2], b: &[Rat; 2]) -> bool {
    orient2(a, b, p) == 0
        && p[0] >= a[0].clone().min(b[0].clone())
        && p[0] <= a[0].clone().max(b[0].clone())
        && p[1] >= a[1].clone().min(b[1].clone())
        && p[1] <= a[1].clone().max(b[1].clone())
}

fn segments_intersect(a: &[Rat; 2], b: &[Rat; 2], c: &[Rat; 2], d: &[Rat; 2]) -> bool {
    let o1 = orient2(a, b, c);
    let o2 = orient2(a, b, d);
    let o3 = orient2(c, d, a);
    let o4 = orient2(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

fn triangles_intersect(s: &[[Rat; 2]; 3], t: &[[Rat; 2]; 3]) -> bool {
    if s.iter().any(|p| point_in_triangle(p, t)) || t.iter().any(|p| point_in_triangle(p, s)) {
        return true;
    }
    let edges = [(0usize, 1usize), (1, 2), (2, 0)];
    for (i, j) in edges {
        for (k, l) in edges {
            if segments_intersect(&s[i], &s[j], &t[k], &t[l]) {
                return true;
            }
        }
    }
    false
}

/// Do the cells (convex hulls) admit a joining segment parallel to the
/// common normal? Decided by projecting both cells along the normal and
/// intersecting the shadows: interval overlap in the plane, exact
/// triangle intersection in space.
fn cells_face_oracle(c1: &[Vec<i64>], c2: &[Vec<i64>], normal: &[i64]) -> bool {
    match normal.len() {
        2 => {
            // shadow on the line direction (-n2, n1)
            let dir = [-normal[1], normal[0]];
            let i1: Vec<i128> = c1.iter().map(|p| dot(&dir, p)).collect();
            let i2: Vec<i128> = c2.iter().map(|p| dot(&dir, p)).collect();
            let (a_lo, a_hi) = (i1.iter().min().unwrap(), i1.iter().max().unwrap());
            let (b_lo, b_hi) = (i2.iter().min().unwrap(), i2.iter().max().unwrap());
            a_hi >= b_lo && b_hi >= a_lo
        }
        3 => {
            // drop the axis of the largest normal coordinate after
            // projecting along the normal; the map x -> (x_i - n_i x_k /
            // n_k) identifies points exactly when they differ by a
            // multiple of the normal
            let k = (0..3).max_by_key(|&k| normal[k].abs()).unwrap();
            let axes: Vec<usize> = (0..3).filter(|&i| i != k).collect();
            let nk = Rat::from_integer(Int::from(normal[k]));
            let shadow = |p: &Vec<i64>| -> [Rat; 2] {
                let xk = Rat::from_integer(Int::from(p[k]));
                let coord = |i: usize| {
                    Rat::from_integer(Int::from(p[i]))
                        - Rat::from_integer(Int::from(normal[i])) * &xk / &nk
                };
                [coord(axes[0]), coord(axes[1])]
            };
            let t1 = [shadow(&c1[0]), shadow(&c1[1]), shadow(&c1[2])];
            let t2 = [shadow(&c2[0]), shadow(&c2[1]), shadow(&c2[2])];
            triangles_intersect(&t1, &t2)
        }
        _ => unreachable!("oracle dimensions are 2 or 3"),
    }
}

/// All valid separating pairs of the lock search, found by checking every
/// pair of point subsets against the definitions directly: parallel
/// distinct planes, correct sides by substitution, emptiness of the strip
/// between the planes, and facing shadows. Sorted ascending, so the first
/// element is what the pruned search must return.
///
/// The strip check is an exhaustive box search in the plane; in space the
/// box bound grows beyond desk scale, so there the oracle instead uses
/// that a primitive normal takes every integer value on the lattice and
/// only checks the strip for intermediate integers.
pub fn lock_oracle(
    data: &BTreeSet<Datum>,
    dim: usize,
) -> Result<Vec<(BasicSet, BasicSet)>, HarnessError> {
    if !(2..=3).contains(&dim) {
        return Err(HarnessError::BoundsExceeded("lock oracle dimension"));
    }
    if data.len() > MAX_LOCK_POINTS {
        return Err(HarnessError::BoundsExceeded("lock oracle data size"));
    }
    let mut pos: Vec<Vec<i64>> = Vec::new();
    let mut neg: Vec<Vec<i64>> = Vec::new();
    for d in data {
        let p = to_i64s(&d.point)?;
        if d.positive {
            pos.push(p);
        } else {
            neg.push(p);
        }
    }
    let max_coord = data
        .iter()
        .flat_map(|d| d.point.coords())
        .map(|c| c.abs().to_i64().unwrap_or(i64::MAX))
        .max()
        .unwrap_or(0);

    let mut found: Vec<(BasicSet, BasicSet)> = Vec::new();
    let mut cp = alloc::vec![0usize; dim];
    subsets(pos.len(), &mut cp, 0, 0, &mut |pi: &[usize]| -> Result<(), HarnessError> {
        let cpts: Vec<Vec<i64>> = pi.iter().map(|&i| pos[i].clone()).collect();
        let Some(n1) = plane_normal(&cpts) else {
            return Ok(());
        };
        let mut inner_cm = alloc::vec![0usize; dim];
        subsets(neg.len(), &mut inner_cm, 0, 0, &mut |ni: &[usize]| -> Result<(), HarnessError> {
            let npts: Vec<Vec<i64>> = ni.iter().map(|&i| neg[i].clone()).collect();
            let Some(n2) = plane_normal(&npts) else {
                return Ok(());
            };
            if n1 != n2 {
                return Ok(());
            }
            let o_pos = dot(&n1, &cpts[0]);
            let o_neg = dot(&n1, &npts[0]);
            if o_pos == o_neg {
                return Ok(());
            }
            // all positives on the far side of the positive plane,
            // all negatives on the far side of the negative plane
            let side = (o_neg - o_pos).signum();
            let ok_pos = pos.iter().all(|p| (dot(&n1, p) - o_pos) * side <= 0);
            let ok_neg = neg.iter().all(|q| (dot(&n1, q) - o_neg) * side >= 0);
            if !ok_pos || !ok_neg {
                return Ok(());
            }
            if strip_holds_lattice_point(&n1, o_pos, o_neg, max_coord, dim)? {
                return Ok(());
            }
            if !cells_face_oracle(&cpts, &npts, &n1) {
                return Ok(());
            }
            let bs = |pts: &[Vec<i64>]| {
                BasicSet::new(pts.iter().map(|p| IntVec::from_i64s(p)).collect())
                    .expect("nondegenerate by the normal check")
            };
            found.push((bs(&cpts), bs(&npts)));
            Ok(())
        })?;
        Ok(())
    })?;
    found.sort();
    Ok(found)
}

/// Is there a lattice point strictly between the parallel planes at
/// values `o1`, `o2` of `normal`?
fn strip_holds_lattice_point(
    normal: &[i64],
    o1: i128,
    o2: i128,
    max_coord: i64,
    dim: usize,
) -> Result<bool, HarnessError> {
    let (lo, hi) = if o1 < o2 { (o1, o2) } else { (o2, o1) };
    if dim == 2 {
        // sound box: the strip passes within sqrt(2) * max_coord of the
        // origin and lattice points on a line are one normal-length apart
        let radius = 2 * max_coord + normal.iter().map(|c| c.abs()).sum::<i64>() + 2;
        if (2 * radius + 1).pow(2) > MAX_BOX_POINTS {
            return Err(HarnessError::BoundsExceeded("strip search box"));
        }
        let mut hit = false;
        for_each_box(2, radius, &mut |p| {
            let v = dot(normal, p);
            if v > lo && v < hi {
                hit = true;
                return false;
            }
            true
        });
        Ok(hit)
    } else {
        // primitive normals realize every integer value on the lattice
        Ok(hi - lo >= 2)
    }
}

fn subsets(
    n: usize,
    scratch: &mut [usize],
    start: usize,
    depth: usize,
    f: &mut dyn FnMut(&[usize]) -> Result<(), HarnessError>,
) -> Result<(), HarnessError> {
    let k = scratch.len();
    if depth == k {
        return f(scratch);
    }
    if start + (k - depth) > n {
        return Ok(());
    }
    for i in start..n {
        scratch[depth] = i;
        subsets(n, scratch, i + 1, depth + 1, f)?;
    }
    Ok(())
}
