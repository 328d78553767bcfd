//! Independent brute-force catalogue of stable weighted graphs, used to check
//! the enumerator. Shares nothing with the library beyond the graph type.

use tropical_torelli::graphs::WeightedGraph;

#[derive(Clone, Debug)]
pub struct Raw {
    pub weights: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn multisets(pairs: &[(usize, usize)], k: usize, start: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..pairs.len() {
        cur.push(pairs[i]);
        multisets(pairs, k, i, cur, out);
        cur.pop();
    }
}

fn weightings(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for w in 0..=total {
        for mut rest in weightings(n - 1, total - w) {
            rest.insert(0, w);
            out.push(rest);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn sorted_edges(edges: &[(usize, usize)], perm: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    e.sort();
    e
}

pub fn isomorphic(a: &Raw, b: &Raw) -> bool {
    if a.weights.len() != b.weights.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    let target = sorted_edges(&b.edges, &(0..b.weights.len()).collect::<Vec<_>>());
    permutations(a.weights.len()).into_iter().any(|p| {
        (0..a.weights.len()).all(|v| a.weights[v] == b.weights[p[v]]) && sorted_edges(&a.edges, &p) == target
    })
}

fn stable(r: &Raw) -> bool {
    (0..r.weights.len()).all(|v| {
        let val: usize = r.edges.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum();
        r.weights[v] > 0 || val >= 3
    })
}

/// Every connected stable weighted graph of genus g with at most `max_v`
/// vertices and `3g - 3` edges, up to isomorphism.
pub fn oracle(g: usize, max_v: usize) -> Vec<Raw> {
    let max_e = (3 * g).saturating_sub(3).max(1);
    let mut classes: Vec<Raw> = Vec::new();
    for n in 1..=max_v {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        for m in 0..=max_e {
            if m + 1 < n || m + 1 - n > g {
                continue;
            }
            let deficit = (g - (m + 1 - n)) as u32;
            let mut sets = Vec::new();
            multisets(&pairs, m, 0, &mut Vec::new(), &mut sets);
            for edges in sets {
                if !connected(n, &edges) {
                    continue;
                }
                for weights in weightings(n, deficit) {
                    let r = Raw { weights, edges: edges.clone() };
                    if stable(&r) && !classes.iter().any(|c| isomorphic(c, &r)) {
                        classes.push(r);
                    }
                }
            }
        }
    }
    classes
}

pub fn to_raw(g: &WeightedGraph) -> Raw {
    Raw { weights: g.weights().to_vec(), edges: g.edges().to_vec() }
}

