//! Marching squares for the zero set of a scalar field sampled on a
//! tensor grid that is periodic in its second coordinate.
//!
//! Crossings are placed by linear interpolation on grid edges and chained
//! into polylines through shared edges.

use std::collections::HashMap;

/// Grid values `values[i * n_v + j]` at `(u[i], v[j])`; `v` wraps around
/// with period `v_period`.
#[derive(Debug, Clone)]
pub struct PeriodicGrid {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub v_period: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum EdgeKey {
    /// Between `(i, j)` and `(i + 1, j)`.
    AlongU(usize, usize),
    /// Between `(i, j)` and `(i, j + 1)`.
    AlongV(usize, usize),
}

/// One chained piece of the zero set, as `(u, v)` points. `v` is unwrapped
/// along the chain, so consecutive points never jump by a period.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCurve {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

impl PeriodicGrid {
    pub fn sample(u: Vec<f64>, v: Vec<f64>, v_period: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = u
            .iter()
            .flat_map(|&a| v.iter().map(move |&b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        Self {
            u,
            v,
            v_period,
            values,
        }
    }

    fn n_v(&self) -> usize {
        self.v.len()
    }

    fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_v() + j % self.n_v()]
    }

    fn v_at(&self, j: usize) -> f64 {
        let n = self.n_v();
        self.v[j % n] + (j / n) as f64 * self.v_period
    }

    fn positive(x: f64) -> bool {
        x > 0.0
    }

    fn crossing(&self, e: EdgeKey) -> Option<[f64; 2]> {
        let (a, b, pa, pb) = match e {
            EdgeKey::AlongU(i, j) => (
                self.value(i, j),
                self.value(i + 1, j),
                [self.u[i], self.v_at(j)],
                [self.u[i + 1], self.v_at(j)],
            ),
            EdgeKey::AlongV(i, j) => (
                self.value(i, j),
                self.value(i, j + 1),
                [self.u[i], self.v_at(j)],
                [self.u[i], self.v_at(j + 1)],
            ),
        };
        if Self::positive(a) == Self::positive(b) {
            return None;
        }
        let w = if a == b { 0.5 } else { a / (a - b) };
        Some([pa[0] + w * (pb[0] - pa[0]), pa[1] + w * (pb[1] - pa[1])])
    }

    /// True if the four corners of cell `(i, j)` do not all share a sign.
    pub fn cell_crosses(&self, i: usize, j: usize) -> bool {
        let c = [
            self.value(i, j),
            self.value(i + 1, j),
            self.value(i + 1, j + 1),
            self.value(i, j + 1),
        ];
        let first = Self::positive(c[0]);
        c.iter().any(|&x| Self::positive(x) != first)
    }

    fn segments(&self) -> Vec<(EdgeKey, EdgeKey)> {
        let n_v = self.n_v();
        let mut out = Vec::new();
        for i in 0..self.u.len().saturating_sub(1) {
            for j in 0..n_v {
                let jn = (j + 1) % n_v;
                let edges = [
                    EdgeKey::AlongU(i, j),
                    EdgeKey::AlongV(i + 1, j),
                    EdgeKey::AlongU(i, jn),
                    EdgeKey::AlongV(i, j),
                ];
                let hits: Vec<EdgeKey> = edges
                    .iter()
                    .copied()
                    .filter(|&e| self.crossing(e).is_some())
                    .collect();
                match hits.len() {
                    2 => out.push((hits[0], hits[1])),
                    4 => {
                        // Saddle: resolve with the cell-centre average.
                        let centre = 0.25
                            * (self.value(i, j)
                                + self.value(i + 1, j)
                                + self.value(i + 1, j + 1)
                                + self.value(i, j + 1));
                        if Self::positive(centre) == Self::positive(self.value(i, j)) {
                            out.push((hits[0], hits[1]));
                            out.push((hits[2], hits[3]));
                        } else {
                            out.push((hits[0], hits[3]));
                            out.push((hits[1], hits[2]));
                        }
                    }
                    _ => {}
                }
            }
        }
        out
    }

    /// Chains all crossings into polylines.
    pub fn zero_curves(&self) -> Vec<ZeroCurve> {
        let segments = self.segments();
        let mut adjacency: HashMap<EdgeKey, Vec<EdgeKey>> = HashMap::new();
        for &(a, b) in &segments {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        }
        let mut nodes: Vec<EdgeKey> = adjacency.keys().copied().collect();
        nodes.sort();
        let mut visited: HashMap<EdgeKey, bool> = HashMap::new();
        let mut curves = Vec::new();
        // Open chains first (start at degree-one nodes), then cycles.
        let starts: Vec<EdgeKey> = nodes
            .iter()
            .copied()
            .filter(|n| adjacency[n].len() == 1)
            .chain(nodes.iter().copied())
            .collect();
        for start in starts {
            if visited.get(&start).copied().unwrap_or(false) {
                continue;
            }
            let mut chain = vec![start];
            visited.insert(start, true);
            let mut current = start;
            while let Some(n) = adjacency[&current]
                .iter()
                .copied()
                .find(|n| !visited.get(n).copied().unwrap_or(false))
            {
                visited.insert(n, true);
                chain.push(n);
                current = n;
            }
            let closed = chain.len() > 2 && adjacency[&current].contains(&start);
            curves.push(ZeroCurve {
                points: self.unwrap_chain(&chain),
                closed,
            });
        }
        curves
    }

    fn unwrap_chain(&self, chain: &[EdgeKey]) -> Vec<[f64; 2]> {
        let mut pts: Vec<[f64; 2]> = chain
            .iter()
            .map(|&e| self.crossing(e).expect("chained edges cross"))
            .collect();
        for k in 1..pts.len() {
            let prev = pts[k - 1][1];
            let mut v = pts[k][1];
            while v - prev > 0.5 * self.v_period {
                v -= self.v_period;
            }
            while prev - v > 0.5 * self.v_period {
                v += self.v_period;
            }
            pts[k][1] = v;
        }
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    fn periodic(n: usize) -> Vec<f64> {
        (0..n).map(|j| TAU * j as f64 / n as f64).collect()
    }

    #[test]
    fn horizontal_level_is_one_closed_loop() {
        let g = PeriodicGrid::sample(linspace(0.0, 1.0, 11), periodic(40), TAU, |u, _| u - 0.55);
        let curves = g.zero_curves();
        assert_eq!(curves.len(), 1);
        assert!(curves[0].closed);
        assert_eq!(curves[0].points.len(), 40);
        for p in &curves[0].points {
            assert!((p[0] - 0.55).abs() < 1e-12);
        }
    }

    #[test]
    fn arcs_touching_the_boundary_are_open() {
        // u = cos(2v) + 0.5 meets the strip 0 <= u <= 1 in four arcs.
        let g = PeriodicGrid::sample(linspace(0.0, 1.0, 60), periodic(200), TAU, |u, v| {
            u - (2.0 * v).cos() - 0.5
        });
        let curves = g.zero_curves();
        assert_eq!(curves.len(), 4);
        assert!(curves.iter().all(|c| !c.closed));
    }

    #[test]
    fn no_sign_change_no_curves() {
        let g = PeriodicGrid::sample(linspace(0.0, 1.0, 5), periodic(8), TAU, |u, _| u + 1.0);
        assert!(g.zero_curves().is_empty());
        assert!(!g.cell_crosses(0, 0));
    }
}
