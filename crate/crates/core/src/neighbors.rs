//! Exact nearest-neighbor queries over a uniform voxel grid.
//!
//! The index returns bitwise the same distances as a linear scan (ties are
//! broken toward the lowest point index, like a forward scan does), so it can
//! back registration and metric code whose results are checked against
//! brute-force oracles.

use std::collections::HashMap;

use nalgebra::Vector3;

#[derive(Debug)]
pub struct PointIndex {
    points: Vec<Vector3<f64>>,
    cells: HashMap<(i64, i64, i64), Vec<u32>>,
    origin: Vector3<f64>,
    cell_size: f64,
    min_cell: (i64, i64, i64),
    max_cell: (i64, i64, i64),
}

impl PointIndex {
    /// Builds an index with an automatically chosen cell size (about the mean
    /// point spacing).
    pub fn build(points: &[Vector3<f64>]) -> Self {
        let cell_size = if points.is_empty() {
            1.0
        } else {
            let (lo, hi) = bounds(points);
            let diag = (hi - lo).norm();
            let h = diag / (points.len() as f64).cbrt();
            if h.is_finite() && h > 1e-9 {
                h
            } else {
                1e-3
            }
        };
        Self::build_with_cell_size(points, cell_size)
    }

    pub fn build_with_cell_size(points: &[Vector3<f64>], cell_size: f64) -> Self {
        assert!(cell_size > 0.0, "cell size must be positive");
        let origin = if points.is_empty() {
            Vector3::zeros()
        } else {
            bounds(points).0
        };
        let mut cells: HashMap<(i64, i64, i64), Vec<u32>> = HashMap::new();
        let mut min_cell = (i64::MAX, i64::MAX, i64::MAX);
        let mut max_cell = (i64::MIN, i64::MIN, i64::MIN);
        for (i, p) in points.iter().enumerate() {
            let c = cell_of(p, &origin, cell_size);
            min_cell = (min_cell.0.min(c.0), min_cell.1.min(c.1), min_cell.2.min(c.2));
            max_cell = (max_cell.0.max(c.0), max_cell.1.max(c.1), max_cell.2.max(c.2));
            cells.entry(c).or_default().push(i as u32);
        }
        Self {
            points: points.to_vec(),
            cells,
            origin,
            cell_size,
            min_cell,
            max_cell,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Vector3<f64> {
        self.points[i]
    }

    /// Index and distance of the nearest point, or `None` on an empty index.
    pub fn nearest(&self, query: &Vector3<f64>) -> Option<(usize, f64)> {
        self.nearest_bounded(query, f64::INFINITY)
    }

    /// Nearest point at distance ≤ `max_dist` (inclusive).
    pub fn nearest_within(&self, query: &Vector3<f64>, max_dist: f64) -> Option<(usize, f64)> {
        self.nearest_bounded(query, max_dist)
    }

    fn nearest_bounded(&self, query: &Vector3<f64>, max_dist: f64) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let qc = cell_of(query, &self.origin, self.cell_size);
        // First ring that can intersect the populated grid box.
        let start = cell_box_chebyshev(qc, self.min_cell, self.max_cell);
        let max_ring = ring_limit(qc, self.min_cell, self.max_cell);

        let mut best: Option<(u32, f64)> = None; // (index, squared distance)
        let bound2 = if max_dist.is_finite() {
            max_dist * max_dist
        } else {
            f64::INFINITY
        };
        let mut ring = start;
        while ring <= max_ring {
            // Every cell at Chebyshev ring distance d holds points no closer
            // than (d-1)·h, so once that exceeds the best hit we can stop.
            if let Some((_, best_d2)) = best {
                let reach = (ring - 1).max(0) as f64 * self.cell_size;
                if reach * reach > best_d2 {
                    break;
                }
            }
            self.for_each_cell_in_ring(qc, ring, |bucket| {
                for &i in bucket {
                    let d2 = (self.points[i as usize] - query).norm_squared();
                    if d2 > bound2 {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bd2)) => d2 < bd2 || (d2 == bd2 && i < bi),
                    };
                    if better {
                        best = Some((i, d2));
                    }
                }
            });
            ring += 1;
        }
        best.map(|(i, d2)| (i as usize, d2.sqrt()))
    }

    /// Calls `f` with the index of every point at distance ≤ `r` of `center`.
    pub fn for_each_within(&self, center: &Vector3<f64>, r: f64, mut f: impl FnMut(usize)) {
        if self.points.is_empty() || r < 0.0 {
            return;
        }
        let r2 = r * r;
        let lo = cell_of(&(center - Vector3::repeat(r)), &self.origin, self.cell_size);
        let hi = cell_of(&(center + Vector3::repeat(r)), &self.origin, self.cell_size);
        for x in lo.0.max(self.min_cell.0)..=hi.0.min(self.max_cell.0) {
            for y in lo.1.max(self.min_cell.1)..=hi.1.min(self.max_cell.1) {
                for z in lo.2.max(self.min_cell.2)..=hi.2.min(self.max_cell.2) {
                    if let Some(bucket) = self.cells.get(&(x, y, z)) {
                        for &i in bucket {
                            if (self.points[i as usize] - center).norm_squared() <= r2 {
                                f(i as usize);
                            }
                        }
                    }
                }
            }
        }
    }

    fn for_each_cell_in_ring(
        &self,
        center: (i64, i64, i64),
        ring: i64,
        mut f: impl FnMut(&[u32]),
    ) {
        let mut visit = |c: (i64, i64, i64)| {
            if c.0 < self.min_cell.0
                || c.0 > self.max_cell.0
                || c.1 < self.min_cell.1
                || c.1 > self.max_cell.1
                || c.2 < self.min_cell.2
                || c.2 > self.max_cell.2
            {
                return;
            }
            if let Some(bucket) = self.cells.get(&c) {
                f(bucket);
            }
        };
        if ring == 0 {
            visit(center);
            return;
        }
        let d = ring;
        // Two z-faces, two y-faces, two x-faces of the cube shell.
        for dx in -d..=d {
            for dy in -d..=d {
                visit((center.0 + dx, center.1 + dy, center.2 - d));
                visit((center.0 + dx, center.1 + dy, center.2 + d));
            }
        }
        for dx in -d..=d {
            for dz in (-d + 1)..=(d - 1) {
                visit((center.0 + dx, center.1 - d, center.2 + dz));
                visit((center.0 + dx, center.1 + d, center.2 + dz));
            }
        }
        for dy in (-d + 1)..=(d - 1) {
            for dz in (-d + 1)..=(d - 1) {
                visit((center.0 - d, center.1 + dy, center.2 + dz));
                visit((center.0 + d, center.1 + dy, center.2 + dz));
            }
        }
    }
}

fn bounds(points: &[Vector3<f64>]) -> (Vector3<f64>, Vector3<f64>) {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

fn cell_of(p: &Vector3<f64>, origin: &Vector3<f64>, h: f64) -> (i64, i64, i64) {
    (
        ((p.x - origin.x) / h).floor() as i64,
        ((p.y - origin.y) / h).floor() as i64,
        ((p.z - origin.z) / h).floor() as i64,
    )
}

/// Chebyshev distance from a cell to an axis-aligned cell box (0 if inside).
fn cell_box_chebyshev(c: (i64, i64, i64), lo: (i64, i64, i64), hi: (i64, i64, i64)) -> i64 {
    let dx = (lo.0 - c.0).max(c.0 - hi.0).max(0);
    let dy = (lo.1 - c.1).max(c.1 - hi.1).max(0);
    let dz = (lo.2 - c.2).max(c.2 - hi.2).max(0);
    dx.max(dy).max(dz)
}

/// Largest ring that can still contain populated cells.
fn ring_limit(c: (i64, i64, i64), lo: (i64, i64, i64), hi: (i64, i64, i64)) -> i64 {
    let dx = (c.0 - lo.0).abs().max((c.0 - hi.0).abs());
    let dy = (c.1 - lo.1).abs().max((c.1 - hi.1).abs());
    let dz = (c.2 - lo.2).abs().max((c.2 - hi.2).abs());
    dx.max(dy).max(dz)
}
