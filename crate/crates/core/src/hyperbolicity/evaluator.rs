//! Triangle statistics read off an all-pairs distance matrix.
//!
//! The min-max search grows BFS layers outward from the shortest side. A
//! vertex in layer `t` is exactly `t` hops from that side, so once `t`
//! exceeds the best value found no later layer can improve on it.

use super::{DeltaStat, TrianglePath};
use crate::graph::{DistanceMatrix, Graph};

pub struct TriangleEvaluator<'a> {
    g: &'a Graph,
    dm: &'a DistanceMatrix,
    stamp: Vec<u32>,
    epoch: u32,
    layer: Vec<usize>,
    next: Vec<usize>,
}

impl<'a> TriangleEvaluator<'a> {
    pub fn new(g: &'a Graph, dm: &'a DistanceMatrix) -> Self {
        TriangleEvaluator {
            g,
            dm,
            stamp: vec![0; g.n()],
            epoch: 0,
            layer: Vec::new(),
            next: Vec::new(),
        }
    }

    pub fn triangle(&self, a: usize, b: usize, c: usize) -> TrianglePath {
        let paths = [
            self.dm.geodesic(self.g, a, b),
            self.dm.geodesic(self.g, b, c),
            self.dm.geodesic(self.g, c, a),
        ];
        let sides = [self.dm.get(a, b), self.dm.get(b, c), self.dm.get(c, a)];
        TrianglePath { a, b, c, paths, sides }
    }

    pub fn evaluate(&mut self, a: usize, b: usize, c: usize) -> DeltaStat {
        let t = self.triangle(a, b, c);
        let (delta_minmax, witness) = self.minmax(&t);
        let delta_thin = self.thin(&t);
        DeltaStat {
            triangle: t,
            delta_minmax,
            delta_thin,
            witness,
        }
    }

    fn to_side(&self, v: usize, side: &[usize]) -> u32 {
        let row = self.dm.row(v);
        side.iter().map(|&w| row[w]).min().unwrap() as u32
    }

    pub fn thin(&self, t: &TrianglePath) -> u32 {
        let mut worst = 0;
        for side in 0..3 {
            let (o1, o2) = (&t.paths[(side + 1) % 3], &t.paths[(side + 2) % 3]);
            for &u in &t.paths[side] {
                worst = worst.max(self.to_side(u, o1).min(self.to_side(u, o2)));
            }
        }
        worst
    }

    pub fn minmax(&mut self, t: &TrianglePath) -> (u32, usize) {
        let s = (0..3).min_by_key(|&i| t.sides[i]).unwrap();
        let (base, o1, o2) = (&t.paths[s], &t.paths[(s + 1) % 3], &t.paths[(s + 2) % 3]);

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|x| *x = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.layer.clear();
        for &v in base {
            if self.stamp[v] != epoch {
                self.stamp[v] = epoch;
                self.layer.push(v);
            }
        }

        let mut best = (u32::MAX, usize::MAX);
        let mut depth = 0u32;
        while !self.layer.is_empty() && depth <= best.0 {
            for &v in &self.layer {
                let m = depth.max(self.to_side(v, o1)).max(self.to_side(v, o2));
                if m < best.0 || (m == best.0 && v < best.1) {
                    best = (m, v);
                }
            }
            if depth == best.0 {
                break;
            }
            self.next.clear();
            for &v in &self.layer {
                for &u in self.g.neighbors(v) {
                    if self.stamp[u] != epoch {
                        self.stamp[u] = epoch;
                        self.next.push(u);
                    }
                }
            }
            std::mem::swap(&mut self.layer, &mut self.next);
            depth += 1;
        }
        best
    }
}
