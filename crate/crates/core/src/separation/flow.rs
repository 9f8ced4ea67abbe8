//! Min-cost flow on small layered networks with arc lower bounds.
//!
//! Lower bounds are removed by the usual shift (capacity `u - l`, node
//! imbalances adjusted), supplies and demands are wired to a super source and
//! super sink, and the result is solved by successive shortest paths. Initial
//! potentials come from one shortest-path pass in topological order, so
//! negative arc costs are fine as long as the network is acyclic.

use std::fmt;

/// Node role in a separation network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowNode {
    Source,
    Sink,
    /// One node per coefficient slot (column) of the row.
    Coefficient(usize),
    Band(i32),
}

impl fmt::Display for FlowNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowNode::Source => f.write_str("s"),
            FlowNode::Sink => f.write_str("t"),
            FlowNode::Coefficient(j) => write!(f, "v{j}"),
            FlowNode::Band(k) => write!(f, "w[{k}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub lower: i64,
    pub upper: i64,
    pub cost: f64,
}

/// A network with a prescribed source-to-sink flow value.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowNetwork {
    pub nodes: Vec<FlowNode>,
    pub arcs: Vec<FlowArc>,
    pub source: usize,
    pub sink: usize,
    pub required_flow: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowSolution {
    /// Flow on each arc, in the network's arc order.
    pub flow: Vec<i64>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    /// No feasible flow exists. `source_side` is the set of nodes reachable
    /// from the supply side in the final residual graph; the arcs leaving it
    /// cannot carry the `shortfall`.
    #[error("no feasible flow: {shortfall} unit(s) cannot cross the cut around {{{}}}", fmt_nodes(.source_side))]
    Infeasible {
        source_side: Vec<FlowNode>,
        shortfall: i64,
    },
    #[error("arc {arc} has lower bound above upper bound")]
    BadBounds { arc: usize },
    #[error("network contains a directed cycle")]
    Cyclic,
}

fn fmt_nodes(nodes: &[FlowNode]) -> String {
    nodes
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

impl FlowNetwork {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn cost_of(&self, flow: &[i64]) -> f64 {
        self.arcs
            .iter()
            .zip(flow)
            .filter(|(_, &f)| f != 0)
            .map(|(a, &f)| a.cost * f as f64)
            .sum()
    }

    /// Bounds, conservation and flow value.
    pub fn is_feasible_flow(&self, flow: &[i64]) -> bool {
        if flow.len() != self.arcs.len() {
            return false;
        }
        let mut balance = vec![0i64; self.nodes.len()];
        for (a, &f) in self.arcs.iter().zip(flow) {
            if f < a.lower || f > a.upper {
                return false;
            }
            balance[a.from] -= f;
            balance[a.to] += f;
        }
        balance.iter().enumerate().all(|(v, &b)| {
            if v == self.source {
                b == -self.required_flow
            } else if v == self.sink {
                b == self.required_flow
            } else {
                b == 0
            }
        })
    }
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual {
            head: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64, cost: f64) -> usize {
        let e = self.head.len();
        self.head.extend([v, u]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[u].push(e);
        self.adj[v].push(e + 1);
        e
    }
}

fn topological_order(n: usize, arcs: &[FlowArc]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in arcs {
        indeg[a.to] += 1;
        out[a.from].push(a.to);
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).rev().collect();
    while let Some(v) = ready.pop() {
        order.push(v);
        for &w in out[v].iter().rev() {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Integral minimum-cost flow of value `required_flow` from source to sink.
///
/// Ties between equally short augmenting paths go to the lowest node index,
/// and nodes are scanned in arc-insertion order, so the returned flow is a
/// deterministic function of the network.
pub fn min_cost_flow(net: &FlowNetwork) -> Result<FlowSolution, FlowError> {
    let n = net.num_nodes();
    for (idx, a) in net.arcs.iter().enumerate() {
        if a.lower > a.upper || a.lower < 0 {
            return Err(FlowError::BadBounds { arc: idx });
        }
    }
    let topo = topological_order(n, &net.arcs).ok_or(FlowError::Cyclic)?;

    // super source / sink
    let ss = n;
    let tt = n + 1;
    let mut res = Residual::new(n + 2);
    let mut excess = vec![0i64; n];
    excess[net.source] += net.required_flow;
    excess[net.sink] -= net.required_flow;
    let mut arc_edge = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        arc_edge.push(res.add(a.from, a.to, a.upper - a.lower, a.cost));
        excess[a.to] += a.lower;
        excess[a.from] -= a.lower;
    }
    let mut total_supply = 0;
    for v in 0..n {
        if excess[v] > 0 {
            res.add(ss, v, excess[v], 0.0);
            total_supply += excess[v];
        } else if excess[v] < 0 {
            res.add(v, tt, -excess[v], 0.0);
        }
    }

    // potentials: shortest distances from ss over the initial (acyclic) residual graph
    let mut pot = vec![f64::INFINITY; n + 2];
    pot[ss] = 0.0;
    let order: Vec<usize> = std::iter::once(ss).chain(topo).chain([tt]).collect();
    for &u in &order {
        if !pot[u].is_finite() {
            continue;
        }
        for &e in &res.adj[u] {
            if res.cap[e] > 0 {
                let v = res.head[e];
                let d = pot[u] + res.cost[e];
                if d < pot[v] {
                    pot[v] = d;
                }
            }
        }
    }
    for p in pot.iter_mut() {
        if !p.is_finite() {
            *p = 0.0;
        }
    }

    let nn = n + 2;
    let mut sent = 0;
    let mut dist = vec![f64::INFINITY; nn];
    let mut prev_edge = vec![usize::MAX; nn];
    let mut done = vec![false; nn];
    while sent < total_supply {
        dist.fill(f64::INFINITY);
        prev_edge.fill(usize::MAX);
        done.fill(false);
        dist[ss] = 0.0;
        loop {
            let mut u = usize::MAX;
            for v in 0..nn {
                if !done[v] && dist[v].is_finite() && (u == usize::MAX || dist[v] < dist[u]) {
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            for &e in &res.adj[u] {
                if res.cap[e] <= 0 {
                    continue;
                }
                let v = res.head[e];
                let reduced = (res.cost[e] + pot[u] - pot[v]).max(0.0);
                let d = dist[u] + reduced;
                if d < dist[v] {
                    dist[v] = d;
                    prev_edge[v] = e;
                }
            }
        }
        if !dist[tt].is_finite() {
            let source_side = (0..n)
                .filter(|&v| dist[v].is_finite())
                .map(|v| net.nodes[v])
                .collect();
            return Err(FlowError::Infeasible {
                source_side,
                shortfall: total_supply - sent,
            });
        }
        for v in 0..nn {
            pot[v] += dist[v].min(dist[tt]);
        }
        let mut push = total_supply - sent;
        let mut v = tt;
        while v != ss {
            let e = prev_edge[v];
            push = push.min(res.cap[e]);
            v = res.head[e ^ 1];
        }
        let mut v = tt;
        while v != ss {
            let e = prev_edge[v];
            res.cap[e] -= push;
            res.cap[e ^ 1] += push;
            v = res.head[e ^ 1];
        }
        sent += push;
    }

    let flow: Vec<i64> = net
        .arcs
        .iter()
        .zip(&arc_edge)
        .map(|(a, &e)| a.lower + res.cap[e ^ 1])
        .collect();
    let cost = net.cost_of(&flow);
    Ok(FlowSolution { flow, cost })
}
