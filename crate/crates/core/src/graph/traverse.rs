use std::collections::BTreeSet;

use super::{GenealogyGraph, GraphError, NodeIndex};

impl GenealogyGraph {
    /// Every node reachable from `ix` by one or more edges, ascending.
    pub fn descendant_indices(&self, ix: NodeIndex) -> Vec<NodeIndex> {
        let mut seen = vec![false; self.node_count()];
        let mut stack: Vec<NodeIndex> = self.children(ix).to_vec();
        let mut found = Vec::new();
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            found.push(v);
            stack.extend(self.children(v).iter().copied().filter(|&c| !seen[c]));
        }
        found.sort_unstable();
        found
    }

    /// All direct and indirect supervisees of `id`, each counted once.
    pub fn descendants(&self, id: &str) -> Result<BTreeSet<String>, GraphError> {
        let ix = self.require(id)?;
        Ok(self
            .descendant_indices(ix)
            .into_iter()
            .map(|v| self.id(v).to_owned())
            .collect())
    }

    /// Generations of supervisors above `ix`: entry `k - 1` holds every node
    /// with a path of exactly `k` edges down to `ix`.
    pub fn ancestor_generation_indices(&self, ix: NodeIndex) -> Vec<Vec<NodeIndex>> {
        let mut generations = Vec::new();
        let mut frontier: Vec<NodeIndex> = self.parents(ix).to_vec();
        while !frontier.is_empty() {
            let mut next: Vec<NodeIndex> = frontier
                .iter()
                .flat_map(|&v| self.parents(v).iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            generations.push(std::mem::replace(&mut frontier, next));
        }
        generations
    }

    /// Supervisors of `id` by generation, nearest first; ids within a
    /// generation ascend. Empty when `id` has no supervisor.
    pub fn ancestors(&self, id: &str) -> Result<Vec<Vec<String>>, GraphError> {
        let ix = self.require(id)?;
        Ok(self
            .ancestor_generation_indices(ix)
            .into_iter()
            .map(|g| g.into_iter().map(|v| self.id(v).to_owned()).collect())
            .collect())
    }

    /// A longest path starting at `ix`; among equally long paths the
    /// lexicographically smallest id sequence.
    pub fn deepest_path_indices(&self, ix: NodeIndex) -> Vec<NodeIndex> {
        let mut path = vec![ix];
        let mut cursor = ix;
        while self.height(cursor) > 0 {
            let want = self.height(cursor) - 1;
            // Children ascend by id, so the first one on a longest path also
            // gives the smallest sequence.
            cursor = *self
                .children(cursor)
                .iter()
                .find(|&&c| self.height(c) == want)
                .expect("a child continues the longest path");
            path.push(cursor);
        }
        path
    }

    pub fn deepest_path(&self, id: &str) -> Result<Vec<String>, GraphError> {
        let ix = self.require(id)?;
        Ok(self
            .deepest_path_indices(ix)
            .into_iter()
            .map(|v| self.id(v).to_owned())
            .collect())
    }
}
