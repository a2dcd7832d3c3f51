//! Reachability on discovered edge sets: SCC quotients, chain checks, and
//! the oracle stream that emits the order type one class at a time.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::obs::{DomainObs, Edge, Settled, Trace};
use crate::oracle::{Certainty, Oracle, Query};
use crate::universe::{EvalError, Universe};
use crate::vm::QueryEvent;
use crate::Nat;

/// Earliest schedule time at which some vertex `>= from` is mentioned.
pub fn vertex_from_time(rel: &DomainObs<Edge>, from: &Nat) -> Option<u64> {
    rel.points
        .iter()
        .find(|d| &d.point.0 >= from || &d.point.1 >= from)
        .map(|d| d.round)
}

pub fn vertex_time(rel: &DomainObs<Edge>, v: &Nat) -> Option<u64> {
    rel.points
        .iter()
        .find(|d| &d.point.0 == v || &d.point.1 == v)
        .map(|d| d.round)
}

fn reaches_within(edges: &[Edge], from: &Nat, to: &Nat) -> bool {
    let mut adj: BTreeMap<&Nat, Vec<&Nat>> = BTreeMap::new();
    for (a, b) in edges {
        adj.entry(a).or_default().push(b);
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &next in adj.get(v).map(Vec::as_slice).unwrap_or(&[]) {
            if next == to {
                return true;
            }
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Earliest schedule time at which `to` is reachable from `from` (reflexively).
pub fn reach_time(rel: &DomainObs<Edge>, from: &Nat, to: &Nat) -> Option<u64> {
    if from == to {
        return vertex_time(rel, from);
    }
    let edges: Vec<Edge> = rel.point_list().cloned().collect();
    if !reaches_within(&edges, from, to) {
        return None;
    }
    // smallest prefix of the discovery order that already connects them
    let (mut lo, mut hi) = (1, edges.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if reaches_within(&edges[..mid], from, to) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(rel.points[lo - 1].round)
}

/// NO answers about this relation are certified when its domain is known to be complete.
pub fn closed(rel: &DomainObs<Edge>) -> bool {
    rel.settled == Settled::Complete && rel.certain
}

/// Shape of the reachability preorder of a finite edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quotient {
    /// A total chain with this many classes.
    Chain(usize),
    /// Some two classes are incomparable.
    NotTotal,
}

impl Quotient {
    pub fn classes(&self) -> Option<usize> {
        match self {
            Quotient::Chain(n) => Some(*n),
            Quotient::NotTotal => None,
        }
    }
}

/// Tarjan SCC, then check the condensation has a unique topological order.
pub fn quotient(edges: &[Edge]) -> Quotient {
    let vertices: BTreeSet<&Nat> = edges.iter().flat_map(|(a, b)| [a, b]).collect();
    let index: BTreeMap<&Nat, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let n = vertices.len();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in edges {
        adj[index[a]].push(index[b]);
    }
    let comp = tarjan(&adj);
    let classes = comp.iter().copied().max().map_or(0, |m| m + 1);
    // Tarjan numbers components in reverse topological order.
    let mut cedges = BTreeSet::new();
    for (v, outs) in adj.iter().enumerate() {
        for &w in outs {
            if comp[v] != comp[w] {
                cedges.insert((comp[v], comp[w]));
            }
        }
    }
    for c in 1..classes {
        if !cedges.contains(&(c, c - 1)) {
            return Quotient::NotTotal;
        }
    }
    Quotient::Chain(classes)
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut order = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if order[root] != UNSEEN {
            continue;
        }
        // iterative DFS: (vertex, next child index)
        let mut dfs = vec![(root, 0usize)];
        order[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut child)) = dfs.last_mut() {
            if let Some(&w) = adj[v].get(*child) {
                *child += 1;
                if order[w] == UNSEEN {
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    dfs.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
            } else {
                dfs.pop();
                if let Some(&(parent, _)) = dfs.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == order[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Oracle stream over a relation: for `t = 0, 1, …`, stop once no vertex
/// `>= t` exists; otherwise emit `t` when it is a vertex comparable with
/// every emitted representative and equivalent to none of them.
pub fn ord_host(
    u: &Universe,
    rel: Arc<DomainObs<Edge>>,
    oracle: &mut dyn Oracle,
    budget: u64,
) -> Result<Trace, EvalError> {
    let mut steps = 0u64;
    let mut queries = Vec::new();
    let mut emit_steps = Vec::new();
    let mut reps: Vec<Nat> = Vec::new();
    let mut t = Nat::from(0u32);
    let mut ask = |q: Query, steps: &mut u64| -> Result<Option<bool>, EvalError> {
        if *steps >= budget {
            return Ok(None);
        }
        let a = oracle.answer(u, &q)?;
        queries.push(QueryEvent {
            step: *steps,
            yes: a.yes,
            certainty: a.certainty,
        });
        *steps += 1;
        Ok(Some(a.yes))
    };
    let finished = 'outer: loop {
        let q = Query::VertexFrom {
            rel: Arc::clone(&rel),
            from: t.clone(),
        };
        match ask(q, &mut steps)? {
            None => break false,
            Some(false) => break true,
            Some(true) => {}
        }
        let q = Query::IsVertex {
            rel: Arc::clone(&rel),
            vertex: t.clone(),
        };
        match ask(q, &mut steps)? {
            None => break false,
            Some(false) => {
                t += 1u32;
                continue;
            }
            Some(true) => {}
        }
        let mut comparable = true;
        let mut fresh = true;
        for x in &reps {
            let fwd = Query::Reaches {
                rel: Arc::clone(&rel),
                from: t.clone(),
                to: x.clone(),
            };
            let Some(a) = ask(fwd, &mut steps)? else {
                break 'outer false;
            };
            let back = Query::Reaches {
                rel: Arc::clone(&rel),
                from: x.clone(),
                to: t.clone(),
            };
            let Some(b) = ask(back, &mut steps)? else {
                break 'outer false;
            };
            comparable &= a || b;
            fresh &= !(a && b);
        }
        if comparable && fresh {
            if steps >= budget {
                break false;
            }
            emit_steps.push(steps);
            steps += 1;
            reps.push(t.clone());
        }
        t += 1u32;
    };
    let certain = queries.iter().all(|q| q.certainty == Certainty::Certain);
    let settled = if finished {
        rel.settled
    } else {
        crate::obs::settled_by_steps(emit_steps.last().copied(), budget)
    };
    Ok(Trace {
        steps: if finished { steps } else { budget },
        budget,
        emit_steps: emit_steps.clone(),
        queries,
        halted: finished.then(|| Nat::from(emit_steps.len())),
        settled,
        certain: certain && rel.certain,
    })
}
