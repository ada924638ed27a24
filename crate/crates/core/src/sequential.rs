//! Finite two-player perfect-information game trees and backward induction.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Decision {
        /// 0 or 1
        player: usize,
        /// `(action label, child)` in listed order
        actions: Vec<(String, NodeId)>,
    },
    Leaf {
        payoffs: [f64; 2],
    },
}

/// Arena-backed game tree. Construct with [`TreeBuilder`].
#[derive(Debug, Clone, PartialEq)]
pub struct GameTree {
    nodes: Vec<Node>,
    root: NodeId,
}

/// Builds trees bottom-up: leaves first, then decisions referring to them.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, payoffs: [f64; 2]) -> NodeId {
        self.nodes.push(Node::Leaf { payoffs });
        self.nodes.len() - 1
    }

    pub fn decision(&mut self, player: usize, actions: Vec<(&str, NodeId)>) -> NodeId {
        self.nodes.push(Node::Decision {
            player,
            actions: actions.into_iter().map(|(l, c)| (l.to_string(), c)).collect(),
        });
        self.nodes.len() - 1
    }

    pub fn build(self, root: NodeId) -> Result<GameTree> {
        GameTree::new(self.nodes, root)
    }
}

impl GameTree {
    /// Validates that `root` spans a finite tree: every decision has at least one
    /// child, action labels are unique per node, each node has one parent, players are 0 or 1.
    pub fn new(nodes: Vec<Node>, root: NodeId) -> Result<Self> {
        if root >= nodes.len() {
            return Err(Error::Structure(format!("root {root} out of range")));
        }
        let mut parent_count = vec![0usize; nodes.len()];
        for (id, node) in nodes.iter().enumerate() {
            if let Node::Decision { player, actions } = node {
                if *player > 1 {
                    return Err(Error::Structure(format!("node {id}: player {player} is not 0 or 1")));
                }
                if actions.is_empty() {
                    return Err(Error::Structure(format!("node {id}: decision without actions")));
                }
                for (k, (label, child)) in actions.iter().enumerate() {
                    if *child >= nodes.len() {
                        return Err(Error::Structure(format!("node {id}: child {child} out of range")));
                    }
                    if actions[..k].iter().any(|(l, _)| l == label) {
                        return Err(Error::Structure(format!("node {id}: duplicate action {label}")));
                    }
                    parent_count[*child] += 1;
                }
            }
        }
        if parent_count[root] != 0 {
            return Err(Error::Structure("root has a parent".into()));
        }
        if parent_count.iter().any(|&c| c > 1) {
            return Err(Error::Structure("node with several parents".into()));
        }
        // reachability from the root also rules out cycles given single parents
        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id], true) {
                return Err(Error::Structure("cycle in tree".into()));
            }
            if let Node::Decision { actions, .. } = &nodes[id] {
                stack.extend(actions.iter().map(|(_, c)| *c));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Structure("node unreachable from root".into()));
        }
        Ok(Self { nodes, root })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn decision_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, Node::Decision { .. }))
            .map(|(id, _)| id)
    }

    /// Copy with `f` applied to one player's leaf payoffs.
    pub fn map_leaves(&self, player: usize, f: impl Fn(f64) -> f64) -> Self {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Leaf { payoffs } => {
                    let mut p = *payoffs;
                    p[player] = f(p[player]);
                    Node::Leaf { payoffs: p }
                }
                other => other.clone(),
            })
            .collect();
        Self { nodes, root: self.root }
    }

    fn child(&self, id: NodeId, label: &str) -> Option<NodeId> {
        match &self.nodes[id] {
            Node::Decision { actions, .. } => actions.iter().find(|(l, _)| l == label).map(|(_, c)| *c),
            Node::Leaf { .. } => None,
        }
    }
}

/// A complete pure strategy profile plus the play it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyMap {
    /// Chosen action label at every decision node, on and off the path.
    pub choice: BTreeMap<NodeId, String>,
    /// Action labels along the induced path from the root.
    pub path: Vec<String>,
    /// Payoffs of the leaf the path ends in.
    pub payoffs: [f64; 2],
}

/// Subgame perfect equilibrium by backward induction. Among equal continuation
/// payoffs the first-listed action wins.
pub fn backward_induction(tree: &GameTree) -> StrategyMap {
    let mut choice = BTreeMap::new();
    let mut values: Vec<Option<[f64; 2]>> = vec![None; tree.len()];
    solve_node(tree, tree.root(), &mut choice, &mut values);
    let (path, payoffs) = follow(tree, &choice).expect("choices cover every node");
    StrategyMap { choice, path, payoffs }
}

fn solve_node(
    tree: &GameTree,
    id: NodeId,
    choice: &mut BTreeMap<NodeId, String>,
    values: &mut [Option<[f64; 2]>],
) -> [f64; 2] {
    let value = match tree.node(id) {
        Node::Leaf { payoffs } => *payoffs,
        Node::Decision { player, actions } => {
            let mut best: Option<(&str, [f64; 2])> = None;
            for (label, child) in actions {
                let v = solve_node(tree, *child, choice, values);
                if best.is_none_or(|(_, b)| v[*player] > b[*player]) {
                    best = Some((label, v));
                }
            }
            let (label, v) = best.expect("decision has actions");
            choice.insert(id, label.to_string());
            v
        }
    };
    values[id] = Some(value);
    value
}

/// Walks the tree from the root following `choice`.
fn follow(tree: &GameTree, choice: &BTreeMap<NodeId, String>) -> Result<(Vec<String>, [f64; 2])> {
    let mut path = Vec::new();
    let mut id = tree.root();
    loop {
        match tree.node(id) {
            Node::Leaf { payoffs } => return Ok((path, *payoffs)),
            Node::Decision { .. } => {
                let label = choice
                    .get(&id)
                    .ok_or_else(|| Error::Structure(format!("no choice at node {id}")))?;
                id = tree
                    .child(id, label)
                    .ok_or_else(|| Error::Structure(format!("node {id} has no action {label}")))?;
                path.push(label.clone());
            }
        }
    }
}

/// Outcome reached from `id` when everyone follows `choice`.
fn continuation(tree: &GameTree, id: NodeId, choice: &BTreeMap<NodeId, String>) -> Result<[f64; 2]> {
    let mut id = id;
    loop {
        match tree.node(id) {
            Node::Leaf { payoffs } => return Ok(*payoffs),
            Node::Decision { .. } => {
                let label = choice
                    .get(&id)
                    .ok_or_else(|| Error::Structure(format!("no choice at node {id}")))?;
                id = tree
                    .child(id, label)
                    .ok_or_else(|| Error::Structure(format!("node {id} has no action {label}")))?;
            }
        }
    }
}

/// One-shot deviation check: true iff at every decision node the prescribed action
/// is payoff-maximal for the mover given that play continues according to `strategy`.
/// Fails with a structural error when a decision node has no (valid) choice.
pub fn verify_spe(tree: &GameTree, strategy: &StrategyMap) -> Result<bool> {
    for id in tree.decision_nodes() {
        let Node::Decision { player, actions } = tree.node(id) else {
            unreachable!()
        };
        let prescribed = continuation(tree, id, &strategy.choice)?;
        for (_, child) in actions {
            if continuation(tree, *child, &strategy.choice)?[*player] > prescribed[*player] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
