//! Lagrange shape functions of arbitrary order on triangles, written in
//! barycentric coordinates.
//!
//! Local node order: the three vertices, then `p - 1` nodes on each edge
//! (edge `i` is opposite vertex `i` and runs from vertex `i+1` to `i+2`),
//! then the interior nodes.

use crate::scalar::{count, Real};

#[derive(Clone, Debug)]
pub struct LagrangeBasis {
    order: usize,
    /// Barycentric multi-index of each node, summing to `order`.
    nodes: Vec<[usize; 3]>,
}

/// Values and barycentric derivatives of every shape function at one point.
#[derive(Clone, Debug)]
pub struct ShapeEval<T> {
    pub values: Vec<T>,
    /// `∂φ/∂λ_m`.
    pub d1: Vec<[T; 3]>,
    /// `∂²φ/∂λ_m∂λ_n`.
    pub d2: Vec<[[T; 3]; 3]>,
}

impl LagrangeBasis {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "order must be at least 1");
        let p = order;
        let mut nodes = Vec::new();
        for i in 0..3 {
            let mut a = [0; 3];
            a[i] = p;
            nodes.push(a);
        }
        for i in 0..3 {
            let (s, e) = ((i + 1) % 3, (i + 2) % 3);
            for j in 1..p {
                let mut a = [0; 3];
                a[s] = p - j;
                a[e] = j;
                nodes.push(a);
            }
        }
        for a1 in 1..p {
            for a2 in 1..p {
                if a1 + a2 < p {
                    nodes.push([p - a1 - a2, a1, a2]);
                }
            }
        }
        Self { order, nodes }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[[usize; 3]] {
        &self.nodes
    }

    pub fn num_interior(&self) -> usize {
        let p = self.order;
        if p < 3 {
            0
        } else {
            (p - 1) * (p - 2) / 2
        }
    }

    /// Evaluates all shape functions at barycentric point `lambda`.
    pub fn eval<T: Real>(&self, lambda: [T; 3]) -> ShapeEval<T> {
        let p = self.order;
        let pf = count::<T>(p);
        // g_a(t) = prod_{i<a} (p t - i)/(i+1) and its first two derivatives
        let mut table = [[[T::zero(); 3]; 8]; 3];
        for m in 0..3 {
            let t = lambda[m];
            let (mut g, mut g1, mut g2) = (T::one(), T::zero(), T::zero());
            table[m][0] = [g, g1, g2];
            for i in 0..p.min(7) {
                let den = count::<T>(i + 1);
                let f = (pf * t - count::<T>(i)) / den;
                let fp = pf / den;
                g2 = g2 * f + lit2(g1 * fp);
                g1 = g1 * f + g * fp;
                g *= f;
                table[m][i + 1] = [g, g1, g2];
            }
        }
        let n = self.nodes.len();
        let mut values = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        for a in &self.nodes {
            let g = [table[0][a[0]], table[1][a[1]], table[2][a[2]]];
            values.push(g[0][0] * g[1][0] * g[2][0]);
            let mut first = [T::zero(); 3];
            let mut second = [[T::zero(); 3]; 3];
            for m in 0..3 {
                let (o1, o2) = ((m + 1) % 3, (m + 2) % 3);
                first[m] = g[m][1] * g[o1][0] * g[o2][0];
                second[m][m] = g[m][2] * g[o1][0] * g[o2][0];
                for k in 0..3 {
                    if k != m {
                        let o = 3 - m - k;
                        second[m][k] = g[m][1] * g[k][1] * g[o][0];
                    }
                }
            }
            d1.push(first);
            d2.push(second);
        }
        ShapeEval { values, d1, d2 }
    }
}

#[inline(always)]
fn lit2<T: Real>(x: T) -> T {
    x + x
}

/// 1D Lagrange basis on equispaced nodes `j / order`, `j = 0..=order`.
pub fn lagrange_1d<T: Real>(order: usize, t: T) -> Vec<T> {
    if order == 0 {
        return vec![T::one()];
    }
    let nodes: Vec<T> = (0..=order)
        .map(|j| count::<T>(j) / count::<T>(order))
        .collect();
    (0..=order)
        .map(|j| {
            let mut v = T::one();
            for (i, &xi) in nodes.iter().enumerate() {
                if i != j {
                    v = v * (t - xi) / (nodes[j] - xi);
                }
            }
            v
        })
        .collect()
}
