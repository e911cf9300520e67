// Primal network simplex for uncapacitated min-cost flow with balanced,
// integral supplies.
//
// Starts from an all-artificial spanning tree hanging off an extra root
// node and keeps the tree strongly feasible (ties for the leaving arc are
// broken toward the last blocking arc from the cycle apex), which rules out
// cycling on the heavily degenerate transportation instances. Potentials
// follow reduced(e) = cost(e) + pi(source) - pi(target); tree arcs have zero
// reduced cost.

use super::{CancelToken, Cancelled};

const CANCEL_CHECK_INTERVAL: usize = 256;

pub(super) enum Outcome {
    /// Flow on each user-added arc, in insertion order.
    Optimal(Vec<i128>),
    Infeasible,
}

pub(super) struct Network {
    supply: Vec<i128>,
    source: Vec<usize>,
    target: Vec<usize>,
    cost: Vec<i128>,
}

struct Tree {
    flow: Vec<i128>,
    in_tree: Vec<bool>,
    /// Tree arcs incident to each node.
    adjacent: Vec<Vec<usize>>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    /// Whether `pred[v]` points from `v` up to its parent.
    up: Vec<bool>,
    depth: Vec<usize>,
    pi: Vec<i128>,
}

impl Network {
    pub(super) fn new(supply: Vec<i128>) -> Self {
        Network {
            supply,
            source: Vec::new(),
            target: Vec::new(),
            cost: Vec::new(),
        }
    }

    pub(super) fn add_arc(&mut self, from: usize, to: usize, cost: i128) {
        self.source.push(from);
        self.target.push(to);
        self.cost.push(cost);
    }

    pub(super) fn solve(mut self, cancel: &CancelToken) -> Result<Outcome, Cancelled> {
        debug_assert_eq!(self.supply.iter().sum::<i128>(), 0);
        let n = self.supply.len();
        let user_arcs = self.source.len();
        let root = n;

        // Large enough that any feasible flow beats routing through the root.
        let max_cost = self.cost.iter().copied().map(i128::abs).max().unwrap_or(0);
        let artificial_cost = (max_cost + 1) * (n as i128 + 1);

        let mut tree = Tree {
            flow: vec![0; user_arcs],
            in_tree: vec![false; user_arcs],
            adjacent: vec![Vec::new(); n + 1],
            parent: vec![root; n + 1],
            pred: vec![usize::MAX; n + 1],
            up: vec![false; n + 1],
            depth: vec![1; n + 1],
            pi: vec![0; n + 1],
        };
        tree.depth[root] = 0;

        for v in 0..n {
            let arc = self.source.len();
            let b = self.supply[v];
            if b >= 0 {
                self.add_arc(v, root, artificial_cost);
                tree.flow.push(b);
                tree.up[v] = true;
                tree.pi[v] = -artificial_cost;
            } else {
                self.add_arc(root, v, artificial_cost);
                tree.flow.push(-b);
                tree.up[v] = false;
                tree.pi[v] = artificial_cost;
            }
            tree.in_tree.push(true);
            tree.pred[v] = arc;
            tree.adjacent[v].push(arc);
            tree.adjacent[root].push(arc);
        }

        let m = self.source.len();
        let block = ((m as f64).sqrt() as usize).max(10);
        let mut next_arc = 0;
        let mut pivots = 0usize;

        loop {
            if pivots.is_multiple_of(CANCEL_CHECK_INTERVAL) && cancel.is_cancelled() {
                return Err(Cancelled);
            }
            let Some(entering) = self.find_entering(&tree, &mut next_arc, block) else {
                break;
            };
            self.pivot(&mut tree, entering);
            pivots += 1;
        }

        if tree.flow[user_arcs..].iter().any(|&f| f > 0) {
            return Ok(Outcome::Infeasible);
        }
        tree.flow.truncate(user_arcs);
        Ok(Outcome::Optimal(tree.flow))
    }

    fn reduced_cost(&self, tree: &Tree, arc: usize) -> i128 {
        self.cost[arc] + tree.pi[self.source[arc]] - tree.pi[self.target[arc]]
    }

    /// Block search pricing: scans arcs cyclically in blocks and returns the
    /// most negative candidate of the first block that has one.
    fn find_entering(&self, tree: &Tree, next_arc: &mut usize, block: usize) -> Option<usize> {
        let m = self.source.len();
        let mut best: Option<(i128, usize)> = None;
        let mut scanned_in_block = 0;
        for step in 0..m {
            let arc = (*next_arc + step) % m;
            if !tree.in_tree[arc] {
                let rc = self.reduced_cost(tree, arc);
                if rc < 0 && best.is_none_or(|(b, _)| rc < b) {
                    best = Some((rc, arc));
                }
            }
            scanned_in_block += 1;
            if scanned_in_block == block {
                if let Some((_, arc)) = best {
                    *next_arc = (*next_arc + step + 1) % m;
                    return Some(arc);
                }
                scanned_in_block = 0;
            }
        }
        best.map(|(_, arc)| {
            *next_arc = (arc + 1) % m;
            arc
        })
    }

    fn pivot(&self, tree: &mut Tree, entering: usize) {
        let first = self.source[entering];
        let second = self.target[entering];

        let mut a = first;
        let mut b = second;
        while a != b {
            if tree.depth[a] >= tree.depth[b] {
                a = tree.parent[a];
            } else {
                b = tree.parent[b];
            }
        }
        let join = a;

        // Flow moves join -> ... -> first -> second -> ... -> join.
        let mut delta = i128::MAX;
        let mut leaving_node = usize::MAX;
        let mut leaving_on_first = true;
        let mut v = first;
        while v != join {
            if tree.up[v] {
                let f = tree.flow[tree.pred[v]];
                if f < delta {
                    delta = f;
                    leaving_node = v;
                }
            }
            v = tree.parent[v];
        }
        let mut v = second;
        while v != join {
            if !tree.up[v] {
                let f = tree.flow[tree.pred[v]];
                if f <= delta {
                    delta = f;
                    leaving_node = v;
                    leaving_on_first = false;
                }
            }
            v = tree.parent[v];
        }
        assert!(leaving_node != usize::MAX, "non-negative costs admit no unbounded cycle");

        if delta > 0 {
            tree.flow[entering] += delta;
            let mut v = first;
            while v != join {
                let arc = tree.pred[v];
                if tree.up[v] {
                    tree.flow[arc] -= delta;
                } else {
                    tree.flow[arc] += delta;
                }
                v = tree.parent[v];
            }
            let mut v = second;
            while v != join {
                let arc = tree.pred[v];
                if tree.up[v] {
                    tree.flow[arc] += delta;
                } else {
                    tree.flow[arc] -= delta;
                }
                v = tree.parent[v];
            }
        }

        let leaving = tree.pred[leaving_node];
        tree.in_tree[leaving] = false;
        tree.in_tree[entering] = true;
        for end in [self.source[leaving], self.target[leaving]] {
            let list = &mut tree.adjacent[end];
            let at = list.iter().position(|&x| x == leaving).expect("tree arc listed");
            list.swap_remove(at);
        }
        tree.adjacent[first].push(entering);
        tree.adjacent[second].push(entering);

        // The subtree cut off by the leaving arc hangs from the entering arc
        // endpoint on the same side; re-root it there.
        let (sub_root, new_parent) = if leaving_on_first {
            (first, second)
        } else {
            (second, first)
        };
        self.attach(tree, sub_root, new_parent, entering);
    }

    fn attach(&self, tree: &mut Tree, sub_root: usize, parent: usize, arc: usize) {
        let mut stack = vec![(sub_root, parent, arc)];
        while let Some((v, p, a)) = stack.pop() {
            tree.parent[v] = p;
            tree.pred[v] = a;
            tree.depth[v] = tree.depth[p] + 1;
            if self.source[a] == v {
                tree.up[v] = true;
                tree.pi[v] = tree.pi[p] - self.cost[a];
            } else {
                tree.up[v] = false;
                tree.pi[v] = tree.pi[p] + self.cost[a];
            }
            for &next in &tree.adjacent[v] {
                if next == a {
                    continue;
                }
                let w = if self.source[next] == v {
                    self.target[next]
                } else {
                    self.source[next]
                };
                stack.push((w, v, next));
            }
        }
    }
}
