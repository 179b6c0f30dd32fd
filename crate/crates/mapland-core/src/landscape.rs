//! Fitness-landscape digraphs of improving LAP moves.
//!
//! Nodes are feasible solutions; a directed edge `u -> v` with weight
//! `f(u) - f(v) > 0` records that some neighborhood's LAP optimum at `u` is
//! the strictly better solution `v`. Exploration expands *every* improving
//! candidate of every discovered node (one candidate per neighborhood in
//! the mode's scan order — the same generator the descents use), so a
//! steepest-descent trajectory is always a path in the recorded graph.
//!
//! Terminology used throughout: **sources** are the deduplicated starting
//! solutions as inserted; **sinks** are nodes with out-degree zero, i.e.
//! the local minima of the neighborhood structure.

use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;

use crate::instance::CostArray;
use crate::lap::LapSolver;
use crate::moves::{improving_candidates, MovePlan, NeighborhoodMode};
use crate::perm::Permutation;
use crate::projection::apply_move_single;
use crate::solution::{count_solutions, enumerate_solutions, Assignment};
use crate::{Error, Objective, Result};

/// Size guards for graph construction.
#[derive(Clone, Copy, Debug)]
pub struct GraphCaps {
    pub max_nodes: u64,
    pub max_edges: u64,
}

impl Default for GraphCaps {
    fn default() -> Self {
        GraphCaps {
            max_nodes: 5_000_000,
            max_edges: 50_000_000,
        }
    }
}

/// A directed improving move between two recorded solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    /// Objective drop `f(from) - f(to)`, always positive.
    pub weight: i64,
}

/// The recorded landscape digraph.
#[derive(Debug, Default)]
pub struct LandscapeGraph {
    d: usize,
    n: usize,
    assignments: Vec<Assignment>,
    objectives: Vec<Objective>,
    is_source: Vec<bool>,
    out_degree: Vec<u32>,
    edges: Vec<Edge>,
    index: HashMap<Assignment, u32>,
    lap_solves: u64,
}

/// Count summary of a landscape graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub n_nodes: u64,
    pub n_edges: u64,
    pub n_sources: u64,
    pub n_sinks: u64,
}

impl LandscapeGraph {
    fn new(d: usize, n: usize) -> Self {
        LandscapeGraph {
            d,
            n,
            ..Default::default()
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.assignments.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn assignment(&self, id: u32) -> &Assignment {
        &self.assignments[id as usize]
    }

    pub fn objective(&self, id: u32) -> Objective {
        self.objectives[id as usize]
    }

    pub fn is_source(&self, id: u32) -> bool {
        self.is_source[id as usize]
    }

    /// A node is a sink when no improving move leaves it (local minimum).
    pub fn is_sink(&self, id: u32) -> bool {
        self.out_degree[id as usize] == 0
    }

    pub fn node_id(&self, s: &Assignment) -> Option<u32> {
        self.index.get(s).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sink ids in ascending discovery order.
    pub fn sink_ids(&self) -> Vec<u32> {
        (0..self.node_count() as u32).filter(|&i| self.is_sink(i)).collect()
    }

    pub fn source_count(&self) -> u64 {
        self.is_source.iter().filter(|&&s| s).count() as u64
    }

    pub fn sink_count(&self) -> u64 {
        self.out_degree.iter().filter(|&&d| d == 0).count() as u64
    }

    /// Total LAP solves spent building this graph.
    pub fn lap_solves(&self) -> u64 {
        self.lap_solves
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            n_nodes: self.node_count() as u64,
            n_edges: self.edge_count() as u64,
            n_sources: self.source_count(),
            n_sinks: self.sink_count(),
        }
    }

    fn push_node(&mut self, s: Assignment, objective: Objective, source: bool) -> u32 {
        let id = self.assignments.len() as u32;
        self.index.insert(s.clone(), id);
        self.assignments.push(s);
        self.objectives.push(objective);
        self.is_source.push(source);
        self.out_degree.push(0);
        id
    }

    fn push_edge(&mut self, from: u32, to: u32, weight: i64) {
        debug_assert!(weight > 0, "improving edges drop the objective");
        self.edges.push(Edge { from, to, weight });
        self.out_degree[from as usize] += 1;
    }

    /// Writes one `from to weight` line per edge, in discovery order.
    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for e in &self.edges {
            writeln!(w, "{} {} {}", e.from, e.to, e.weight)?;
        }
        Ok(())
    }

    /// Writes one `id objective is_source is_sink encoding` line per node
    /// (flags as 0/1, encoding as the canonical `2,1|1,2` form).
    pub fn write_node_table<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for id in 0..self.node_count() as u32 {
            writeln!(
                w,
                "{} {} {} {} {}",
                id,
                self.objective(id),
                self.is_source(id) as u8,
                self.is_sink(id) as u8,
                self.assignment(id).encode()
            )?;
        }
        Ok(())
    }
}

/// Expands the improving-move digraph reachable from `starts` under `mode`.
///
/// Sources are the deduplicated starts; each discovered node is expanded
/// exactly once, every improving candidate becoming an edge (parallel edges
/// from one node to the same target are recorded once). Exceeding a cap
/// aborts with an error that carries the partially built graph.
pub fn explore(
    c: &CostArray,
    starts: &[Assignment],
    mode: NeighborhoodMode,
    caps: GraphCaps,
) -> Result<LandscapeGraph> {
    if starts.is_empty() {
        return Err(Error::Config("explore requires at least one start".into()));
    }
    let plan = MovePlan::new(c.d(), mode)?;
    let mut g = LandscapeGraph::new(c.d(), c.n());
    for s in starts {
        let y = c.evaluate(s)?;
        match g.node_id(s) {
            Some(id) => debug_assert!(g.is_source(id)),
            None => {
                if g.node_count() as u64 >= caps.max_nodes {
                    return Err(cap_error("node", caps.max_nodes, g));
                }
                g.push_node(s.clone(), y, true);
            }
        }
    }

    let mut solver = LapSolver::new();
    let mut cursor: usize = 0;
    let mut seen_targets: Vec<u32> = Vec::new();
    while cursor < g.node_count() {
        let u = cursor as u32;
        let s_u = g.assignment(u).clone();
        let y_u = g.objective(u);
        let (cands, solves) = improving_candidates(c, &s_u, y_u, &plan, &mut solver)?;
        g.lap_solves += solves;
        seen_targets.clear();
        for (value, moved) in cands {
            debug_assert_eq!(c.evaluate(&moved).unwrap(), value);
            let v = match g.node_id(&moved) {
                Some(id) => id,
                None => {
                    if g.node_count() as u64 >= caps.max_nodes {
                        return Err(cap_error("node", caps.max_nodes, g));
                    }
                    g.push_node(moved, value, false)
                }
            };
            if seen_targets.contains(&v) {
                continue;
            }
            seen_targets.push(v);
            if g.edge_count() as u64 >= caps.max_edges {
                return Err(cap_error("edge", caps.max_edges, g));
            }
            g.push_edge(u, v, y_u - value);
        }
        cursor += 1;
    }
    Ok(g)
}

fn cap_error(what: &'static str, cap: u64, g: LandscapeGraph) -> Error {
    Error::ExploreCapExceeded {
        what,
        cap,
        partial: Box::new(g),
    }
}

/// Builds the *complete* landscape: every feasible solution is a node
/// (inserted in enumeration order), with the same improving edges as
/// [`explore`]. No node is marked as a source — sources are a multi-start
/// notion. Refuses instances whose solution count exceeds the node cap.
pub fn enumerate_landscape(
    c: &CostArray,
    mode: NeighborhoodMode,
    caps: GraphCaps,
) -> Result<LandscapeGraph> {
    let total = count_solutions(c.d(), c.n())?;
    if total > caps.max_nodes {
        return Err(Error::CapExceeded {
            what: "landscape enumeration",
            required: total,
            cap: caps.max_nodes,
        });
    }
    let plan = MovePlan::new(c.d(), mode)?;
    let mut g = LandscapeGraph::new(c.d(), c.n());
    for s in enumerate_solutions(c.d(), c.n(), caps.max_nodes)? {
        let y = c.evaluate(&s)?;
        g.push_node(s, y, false);
    }
    let mut solver = LapSolver::new();
    let mut seen_targets: Vec<u32> = Vec::new();
    for u in 0..g.node_count() as u32 {
        let s_u = g.assignment(u).clone();
        let y_u = g.objective(u);
        let (cands, solves) = improving_candidates(c, &s_u, y_u, &plan, &mut solver)?;
        g.lap_solves += solves;
        seen_targets.clear();
        for (value, moved) in cands {
            let v = g.node_id(&moved).expect("every solution is a node");
            debug_assert_eq!(g.objective(v), value);
            if seen_targets.contains(&v) {
                continue;
            }
            seen_targets.push(v);
            if g.edge_count() as u64 >= caps.max_edges {
                return Err(cap_error("edge", caps.max_edges, g));
            }
            g.push_edge(u, v, y_u - value);
        }
    }
    Ok(g)
}

/// Structural verification report for the N = 2 move graph; see
/// [`verify_hypercube`].
#[derive(Clone, Debug, Serialize)]
pub struct HypercubeReport {
    pub d: usize,
    pub nodes: u64,
    pub skeleton_edges: u64,
    pub expected_skeleton_edges: u64,
    pub diagonals: u64,
    pub expected_diagonals: u64,
    /// Antipodal label pairs added by dimension-1 moves, sorted.
    pub diagonal_pairs: Vec<(u64, u64)>,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Checks the structure theorem for N = 2 instances: labelling each of the
/// `2^(D-1)` solutions by which columns are transpositions, the undirected
/// move graph over dimensions `2..=D` must be exactly the hypercube
/// `Q_(D-1)` (one-bit flips), and admitting dimension-1 moves must add
/// exactly the `2^(D-2)` antipodal "main diagonals" and nothing else.
///
/// The graph is built by running the real move machinery over every
/// candidate permutation, so a defect in projection/update logic shows up
/// as a failed report rather than a vacuous pass. Costs play no role: the
/// candidate *set* (before LAP filtering) is cost-independent.
pub fn verify_hypercube(d: usize) -> Result<HypercubeReport> {
    if d < 3 {
        return Err(Error::Config(format!("D must be >= 3, got {d}")));
    }
    let nodes_exact = count_solutions(d, 2)?; // 2^(D-1)
    if nodes_exact > crate::solution::DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            what: "hypercube verification",
            required: nodes_exact,
            cap: crate::solution::DEFAULT_ENUMERATION_CAP,
        });
    }
    let mut failures: Vec<String> = Vec::new();
    let all: Vec<Assignment> = enumerate_solutions(d, 2, nodes_exact)?.collect();

    // Label: bit (p-2) set iff the dimension-p column is the transposition.
    let label = |a: &Assignment| -> u64 {
        (2..=d).fold(0u64, |acc, p| acc | (((a.image(p, 0) == 1) as u64) << (p - 2)))
    };
    let labels: std::collections::HashSet<u64> = all.iter().map(&label).collect();
    if labels.len() as u64 != nodes_exact {
        failures.push(format!(
            "label map is not injective: {} labels for {} solutions",
            labels.len(),
            nodes_exact
        ));
    }

    let perms = [Permutation::identity(2), Permutation::from_images(vec![1, 0]).unwrap()];
    let mut skeleton: std::collections::HashSet<(u64, u64)> = std::collections::HashSet::new();
    let mut diagonals: std::collections::HashSet<(u64, u64)> = std::collections::HashSet::new();
    for a in &all {
        let la = label(a);
        for p in 2..=d {
            for pi in &perms {
                let b = apply_move_single(a, p, pi)?;
                if &b == a {
                    continue;
                }
                let lb = label(&b);
                skeleton.insert((la.min(lb), la.max(lb)));
            }
        }
        let b = apply_move_single(a, 1, &perms[1])?;
        if &b != a {
            let lb = label(&b);
            diagonals.insert((la.min(lb), la.max(lb)));
        }
    }

    let bits = (d - 1) as u32;
    let full_mask: u64 = (1u64 << bits) - 1;
    let expected_skeleton = (d as u64 - 1) * (nodes_exact / 2);
    let expected_diagonals = nodes_exact / 2;

    if skeleton.len() as u64 != expected_skeleton {
        failures.push(format!(
            "skeleton has {} edges, hypercube Q_{} needs {expected_skeleton}",
            skeleton.len(),
            bits
        ));
    }
    for &(x, y) in &skeleton {
        if (x ^ y).count_ones() != 1 {
            failures.push(format!("skeleton edge ({x},{y}) is not a one-bit flip"));
        }
    }
    for x in 0..nodes_exact {
        for b in 0..bits {
            let y = x ^ (1 << b);
            if x < y && !skeleton.contains(&(x, y)) {
                failures.push(format!("hypercube edge ({x},{y}) is missing"));
            }
        }
    }

    if diagonals.len() as u64 != expected_diagonals {
        failures.push(format!(
            "{} diagonals recorded, expected {expected_diagonals}",
            diagonals.len()
        ));
    }
    for &(x, y) in &diagonals {
        if x ^ y != full_mask {
            failures.push(format!("diagonal ({x},{y}) is not antipodal"));
        }
        if skeleton.contains(&(x, y)) {
            failures.push(format!("diagonal ({x},{y}) duplicates a skeleton edge"));
        }
    }

    let mut diagonal_pairs: Vec<(u64, u64)> = diagonals.into_iter().collect();
    diagonal_pairs.sort_unstable();
    Ok(HypercubeReport {
        d,
        nodes: nodes_exact,
        skeleton_edges: skeleton.len() as u64,
        expected_skeleton_edges: expected_skeleton,
        diagonals: diagonal_pairs.len() as u64,
        expected_diagonals,
        diagonal_pairs,
        passed: failures.is_empty(),
        failures,
    })
}
