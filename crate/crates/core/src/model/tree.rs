//! CART regression tree with variance-reduction splits.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
        samples: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree {
    /// Root at index 0.
    pub nodes: Vec<Node>,
}

impl RegressionTree {
    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
                Node::Leaf { value, .. } => return value,
            }
        }
    }

    /// Depth of the deepest leaf; a lone leaf has depth 0.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
                Node::Leaf { .. } => 0,
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn leaves(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.nodes.iter().filter_map(|n| match *n {
            Node::Leaf { value, samples } => Some((value, samples)),
            Node::Split { .. } => None,
        })
    }
}

pub(crate) struct TreeParams {
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub features_per_split: usize,
}

pub(crate) struct TreeBuilder<'a> {
    pub x: &'a [Vec<f64>],
    pub y: &'a [f64],
    pub params: &'a TreeParams,
    pub rng: &'a mut ChaCha8Rng,
    nodes: Vec<Node>,
    scratch: Vec<(f64, f64)>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl<'a> TreeBuilder<'a> {
    pub fn new(
        x: &'a [Vec<f64>],
        y: &'a [f64],
        params: &'a TreeParams,
        rng: &'a mut ChaCha8Rng,
    ) -> Self {
        TreeBuilder {
            x,
            y,
            params,
            rng,
            nodes: Vec::new(),
            scratch: Vec::new(),
        }
    }

    /// Grows a tree over the given sample indices (duplicates allowed).
    pub fn build(mut self, samples: &mut [usize]) -> RegressionTree {
        self.grow(samples, 0);
        RegressionTree { nodes: self.nodes }
    }

    fn grow(&mut self, samples: &mut [usize], depth: usize) -> usize {
        let n = samples.len();
        let (sum, sum_sq) = samples.iter().fold((0.0, 0.0), |(s, q), &i| {
            let v = self.y[i];
            (s + v, q + v * v)
        });
        let mean = sum / n as f64;
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf {
            value: mean,
            samples: n,
        });
        let pure = samples.iter().all(|&i| self.y[i] == self.y[samples[0]]);
        if depth >= self.params.max_depth || n < self.params.min_samples_split || pure {
            return at;
        }
        let parent_sse = sum_sq - sum * sum / n as f64;
        let Some(best) = self.best_split(samples, parent_sse) else {
            return at;
        };
        let mut boundary = 0;
        for k in 0..n {
            if self.x[samples[k]][best.feature] <= best.threshold {
                samples.swap(k, boundary);
                boundary += 1;
            }
        }
        let (left_samples, right_samples) = samples.split_at_mut(boundary);
        let left = self.grow(left_samples, depth + 1);
        let right = self.grow(right_samples, depth + 1);
        self.nodes[at] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        at
    }

    fn candidate_features(&mut self) -> Vec<usize> {
        let total = self.x.first().map_or(0, Vec::len);
        let k = self.params.features_per_split.clamp(1, total.max(1));
        if k >= total {
            return (0..total).collect();
        }
        let mut pool: Vec<usize> = (0..total).collect();
        for i in 0..k {
            let j = self.rng.random_range(i..total);
            pool.swap(i, j);
        }
        let mut chosen = pool[..k].to_vec();
        chosen.sort_unstable();
        chosen
    }

    /// Largest SSE reduction over midpoints between consecutive distinct
    /// values. Ties keep the lower feature index, then the lower threshold.
    fn best_split(&mut self, samples: &[usize], parent_sse: f64) -> Option<BestSplit> {
        let n = samples.len();
        let mut best: Option<BestSplit> = None;
        for feature in self.candidate_features() {
            self.scratch.clear();
            self.scratch
                .extend(samples.iter().map(|&i| (self.x[i][feature], self.y[i])));
            self.scratch.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (total, total_sq) = self
                .scratch
                .iter()
                .fold((0.0, 0.0), |(s, q), &(_, v)| (s + v, q + v * v));
            let mut left_sum = 0.0;
            let mut left_sq = 0.0;
            for k in 0..n - 1 {
                let (value, target) = self.scratch[k];
                left_sum += target;
                left_sq += target * target;
                let next = self.scratch[k + 1].0;
                if next <= value {
                    continue;
                }
                let nl = (k + 1) as f64;
                let nr = (n - k - 1) as f64;
                let right_sum = total - left_sum;
                let right_sq = total_sq - left_sq;
                let sse = (left_sq - left_sum * left_sum / nl) + (right_sq - right_sum * right_sum / nr);
                let gain = parent_sse - sse;
                if gain > 0.0 && best.as_ref().is_none_or(|b| gain > b.gain) {
                    let mut threshold = value + (next - value) / 2.0;
                    if threshold >= next {
                        threshold = value;
                    }
                    best = Some(BestSplit {
                        feature,
                        threshold,
                        gain,
                    });
                }
            }
        }
        best
    }
}
