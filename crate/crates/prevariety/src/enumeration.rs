//! The refinement tree: intersecting one cone from every fan.
//!
//! A node holds the running intersection of one cone from each fan used so
//! far. Expanding it against a fresh fan tries every cone of that fan;
//! nonempty results at full depth are outputs, anything shallower becomes a
//! child node. The fan order can be fixed (static) or chosen per node by a
//! greedy count of surviving candidates (dynamic), and candidate pairs can
//! be pruned by relation tables ANDed down the tree.

use std::sync::{Arc, Mutex};

use crate::bits::BitSet;
use crate::cones::{intersect, intersects, ConeOrigin, Fan, HalfOpenCone};
use crate::kernel::ConstraintSystem;
use crate::relation::{FanTables, RelationTable, TableLayout};

/// Counters for one enumeration run. Pairs ruled out by a table bit are
/// never LP-tested, so `pruned_by_table + intersections_attempted` equals
/// the candidate pairs examined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub intersections_attempted: u64,
    pub intersections_nonempty: u64,
    pub pruned_by_table: u64,
    pub output_cones: u64,
}

impl EnumerationStats {
    pub fn merge(&mut self, other: &EnumerationStats) {
        self.intersections_attempted += other.intersections_attempted;
        self.intersections_nonempty += other.intersections_nonempty;
        self.pruned_by_table += other.pruned_by_table;
        self.output_cones += other.output_cones;
    }
}

/// One node of the refinement tree.
#[derive(Clone, Debug)]
pub struct Task {
    pub cone: HalfOpenCone,
    /// AND of the fan-cone tables along this node's lineage; `None` when
    /// pruning is off.
    pub table: Option<RelationTable>,
    /// Fans already intersected in.
    pub used: BitSet,
    /// The (fan, cone) pair taken at each level, in intersection order.
    pub lineage: Vec<(usize, usize)>,
}

impl Task {
    pub fn depth(&self) -> usize {
        self.used.count_ones()
    }
}

/// A nonempty intersection of one cone from every fan.
#[derive(Clone, Debug)]
pub struct OutputCone {
    pub cone: HalfOpenCone,
    pub lineage: Vec<(usize, usize)>,
}

/// Receives output cones; implementations serialize concurrent emissions.
pub trait ConeSink: Sync {
    fn emit(&self, cone: OutputCone);
}

/// Collects output cones in memory.
#[derive(Default)]
pub struct VecSink(Mutex<Vec<OutputCone>>);

impl VecSink {
    pub fn new() -> VecSink {
        VecSink::default()
    }

    pub fn into_cones(self) -> Vec<OutputCone> {
        self.0.into_inner().expect("sink mutex cannot be poisoned")
    }
}

impl ConeSink for VecSink {
    fn emit(&self, cone: OutputCone) {
        self.0.lock().expect("sink mutex cannot be poisoned").push(cone);
    }
}

fn ambient_dim(fans: &[Fan]) -> usize {
    fans.first()
        .and_then(|f| f.cones().first())
        .map(HalfOpenCone::dim)
        .expect("enumeration needs at least one fan with at least one cone")
}

/// The node every enumeration starts from: the full space, all fans unused,
/// the all-ones table when pruning is on.
pub fn root_task(fans: &[Fan], tables: Option<&FanTables>) -> Task {
    let cone = HalfOpenCone::new(ConstraintSystem::new(ambient_dim(fans)), ConeOrigin::Derived)
        .expect("the full space is nonempty");
    Task {
        cone,
        table: tables.map(|t| t.root().clone()),
        used: BitSet::zeros(fans.len()),
        lineage: Vec::new(),
    }
}

/// Starting fan: fewest cones, ties to the lowest index.
pub fn choose_first_fan(fans: &[Fan]) -> usize {
    (0..fans.len())
        .min_by_key(|&i| fans[i].len())
        .expect("at least one fan")
}

/// Next fan for a node: fewest candidate cones left, judged by the node's
/// table block popcount (or the raw fan size when pruning is off); ties to
/// the lowest index.
pub fn choose_next_fan(task: &Task, fans: &[Fan]) -> usize {
    let mut best: Option<(usize, usize)> = None;
    for (i, fan) in fans.iter().enumerate() {
        if task.used.get(i) {
            continue;
        }
        let score = match &task.table {
            Some(t) => t.popcount_fan(i),
            None => fan.len(),
        };
        if best.is_none_or(|(s, _)| score < s) {
            best = Some((score, i));
        }
    }
    best.expect("expand requires an unused fan").1
}

/// Intersect a node with every surviving cone of one fan. Full-depth
/// results go to the sink; the rest come back as child tasks with
/// redundancy removed and tables ANDed.
pub fn expand(
    task: &Task,
    fan_index: usize,
    fans: &[Fan],
    tables: Option<&FanTables>,
    sink: &dyn ConeSink,
    stats: &mut EnumerationStats,
) -> Vec<Task> {
    debug_assert!(!task.used.get(fan_index));
    let leaf = task.depth() + 1 == fans.len();
    let mut children = Vec::new();
    for (ci, d) in fans[fan_index].cones().iter().enumerate() {
        if let Some(t) = &task.table {
            if !t.get(fan_index, ci) {
                stats.pruned_by_table += 1;
                continue;
            }
        }
        stats.intersections_attempted += 1;
        let Some(child) = intersect(&task.cone, d) else {
            continue;
        };
        stats.intersections_nonempty += 1;
        let mut lineage = task.lineage.clone();
        lineage.push((fan_index, ci));
        if leaf {
            stats.output_cones += 1;
            sink.emit(OutputCone {
                cone: child,
                lineage,
            });
        } else {
            let mut used = task.used.clone();
            used.insert(fan_index);
            let table = match (&task.table, tables) {
                (Some(t), Some(ft)) => Some(
                    t.and(ft.table(fan_index, ci))
                        .expect("tables of one run share a layout"),
                ),
                _ => None,
            };
            children.push(Task {
                cone: child.reduced(),
                table,
                used,
                lineage,
            });
        }
    }
    children
}

/// Depth-first enumeration in fixed fan order, no tables.
pub fn enumerate_static(fans: &[Fan], sink: &dyn ConeSink) -> EnumerationStats {
    let mut stats = EnumerationStats::default();
    let root = root_task(fans, None);
    let mut stack = expand(&root, 0, fans, None, sink, &mut stats);
    while let Some(task) = stack.pop() {
        let next = task.depth();
        stack.extend(expand(&task, next, fans, None, sink, &mut stats));
    }
    stats
}

/// Depth-first enumeration with greedy per-node fan choice; relation-table
/// pruning when `tables` is given.
pub fn enumerate_recursive(
    fans: &[Fan],
    tables: Option<&FanTables>,
    sink: &dyn ConeSink,
) -> EnumerationStats {
    let mut stats = EnumerationStats::default();
    let root = root_task(fans, tables);
    let first = choose_first_fan(fans);
    let mut stack = expand(&root, first, fans, tables, sink, &mut stats);
    while let Some(task) = stack.pop() {
        let next = choose_next_fan(&task, fans);
        stack.extend(expand(&task, next, fans, tables, sink, &mut stats));
    }
    stats
}

/// Fill the relation tables by testing every cross-fan pair once.
pub fn init_relation_tables(fans: &[Fan]) -> FanTables {
    let sizes: Vec<usize> = fans.iter().map(Fan::len).collect();
    let mut tables = FanTables::empty(Arc::new(TableLayout::new(&sizes)));
    for i in 0..fans.len() {
        for j in i + 1..fans.len() {
            for (ci, a) in fans[i].cones().iter().enumerate() {
                for (cj, b) in fans[j].cones().iter().enumerate() {
                    if intersects(a, b) {
                        tables.set_pair((i, ci), (j, cj));
                    }
                }
            }
        }
    }
    tables
}
