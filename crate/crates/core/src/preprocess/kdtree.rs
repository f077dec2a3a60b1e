use nalgebra::DMatrix;

const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        dim: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Static KD-tree over the rows of a matrix, answering exact closed-ball
/// radius queries.
#[derive(Debug, Clone)]
pub struct KdTree<'a> {
    points: &'a DMatrix<f64>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

/// Squared Euclidean distance between rows `a` and `b`, summed in column order.
pub fn row_distance_sq(points: &DMatrix<f64>, a: usize, b: usize) -> f64 {
    let mut acc = 0.0;
    for j in 0..points.ncols() {
        let diff = points[(a, j)] - points[(b, j)];
        acc += diff * diff;
    }
    acc
}

impl<'a> KdTree<'a> {
    pub fn build(points: &'a DMatrix<f64>) -> Self {
        let mut tree = KdTree {
            points,
            order: (0..points.nrows()).collect(),
            nodes: Vec::new(),
        };
        if points.nrows() > 0 {
            tree.build_node(0, points.nrows());
        }
        tree
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let dim = self.widest_dim(start, end);
        let mid = start + (end - start) / 2;
        let pts = self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            pts[(a, dim)].total_cmp(&pts[(b, dim)]).then(a.cmp(&b))
        });
        let value = pts[(self.order[mid], dim)];
        self.nodes.push(Node::Leaf { start, end }); // placeholder
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[id] = Node::Split {
            dim,
            value,
            left,
            right,
        };
        id
    }

    fn widest_dim(&self, start: usize, end: usize) -> usize {
        let mut best = (0, f64::NEG_INFINITY);
        for dim in 0..self.points.ncols() {
            let (lo, hi) = self.order[start..end].iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), &i| {
                    let v = self.points[(i, dim)];
                    (lo.min(v), hi.max(v))
                },
            );
            if hi - lo > best.1 {
                best = (dim, hi - lo);
            }
        }
        best.0
    }

    /// Indices `j` with `||x_j - x_query|| <= radius`, ascending. The query
    /// is itself a row of the indexed matrix.
    pub fn within_radius(&self, query: usize, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let r2 = radius * radius;
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            match &self.nodes[id] {
                Node::Leaf { start, end } => {
                    for &j in &self.order[*start..*end] {
                        if row_distance_sq(self.points, query, j) <= r2 {
                            out.push(j);
                        }
                    }
                }
                Node::Split {
                    dim,
                    value,
                    left,
                    right,
                } => {
                    let diff = self.points[(query, *dim)] - value;
                    let far_ok = diff * diff <= r2;
                    if diff <= 0.0 {
                        stack.push(*left);
                        if far_ok {
                            stack.push(*right);
                        }
                    } else {
                        stack.push(*right);
                        if far_ok {
                            stack.push(*left);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
