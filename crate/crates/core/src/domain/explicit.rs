use crate::space::{Cost, SearchSpace, Transition, INFINITE_COST};

/// Directed graph given by adjacency lists, mostly for tests.
///
/// The unary heuristic comes from an explicit table when one is set,
/// otherwise from the Euclidean distance to the nearest goal when states
/// have positions, otherwise it is 0. The pairwise heuristic is Euclidean
/// when positions are set and 0 otherwise.
#[derive(Debug, Clone, Default)]
pub struct ExplicitGraph {
    adjacency: Vec<Vec<(usize, Cost)>>,
    heuristic: Option<Vec<Cost>>,
    positions: Option<Vec<(f64, f64)>>,
    goals: Vec<bool>,
}

impl ExplicitGraph {
    pub fn new(num_states: usize) -> Self {
        ExplicitGraph {
            adjacency: vec![Vec::new(); num_states],
            heuristic: None,
            positions: None,
            goals: vec![false; num_states],
        }
    }

    pub fn num_states(&self) -> usize {
        self.adjacency.len()
    }

    /// Appends an edge; action indices follow insertion order per source.
    pub fn add_edge(&mut self, from: usize, to: usize, cost: Cost) -> &mut Self {
        assert!(cost >= 0.0, "negative edge cost");
        self.adjacency[from].push((to, cost));
        self
    }

    pub fn set_goal(&mut self, s: usize) -> &mut Self {
        self.goals[s] = true;
        self
    }

    pub fn set_heuristic(&mut self, table: Vec<Cost>) -> &mut Self {
        assert_eq!(table.len(), self.num_states());
        self.heuristic = Some(table);
        self
    }

    pub fn set_positions(&mut self, positions: Vec<(f64, f64)>) -> &mut Self {
        assert_eq!(positions.len(), self.num_states());
        self.positions = Some(positions);
        self
    }

    pub fn edges(&self, s: usize) -> &[(usize, Cost)] {
        &self.adjacency[s]
    }

    pub fn goals(&self) -> impl Iterator<Item = usize> + '_ {
        self.goals.iter().enumerate().filter(|(_, &g)| g).map(|(i, _)| i)
    }

    pub fn positions(&self) -> Option<&[(f64, f64)]> {
        self.positions.as_deref()
    }

    fn euclid(&self, a: usize, b: usize) -> Option<f64> {
        let p = self.positions.as_ref()?;
        Some((p[a].0 - p[b].0).hypot(p[a].1 - p[b].1))
    }
}

impl SearchSpace for ExplicitGraph {
    type State = usize;

    fn num_actions(&self, state: &usize) -> usize {
        self.adjacency[*state].len()
    }

    fn evaluate(&self, state: &usize, action: usize) -> Option<Transition<usize>> {
        let &(to, cost) = self.adjacency[*state].get(action)?;
        (cost < INFINITE_COST).then_some(Transition {
            successor: to,
            cost,
        })
    }

    fn heuristic(&self, state: &usize) -> Cost {
        if let Some(table) = &self.heuristic {
            return table[*state];
        }
        if self.positions.is_some() {
            return self
                .goals()
                .filter_map(|g| self.euclid(*state, g))
                .reduce(f64::min)
                .unwrap_or(0.0);
        }
        0.0
    }

    fn pairwise_heuristic(&self, from: &usize, to: &usize) -> Cost {
        self.euclid(*from, *to).unwrap_or(0.0)
    }

    fn is_goal(&self, state: &usize) -> bool {
        self.goals[*state]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_follows_insertion_order() {
        let mut g = ExplicitGraph::new(3);
        g.add_edge(0, 1, 2.0).add_edge(0, 2, 5.0);
        assert_eq!(g.num_actions(&0), 2);
        assert_eq!(g.evaluate(&0, 1), Some(Transition { successor: 2, cost: 5.0 }));
        assert_eq!(g.evaluate(&0, 2), None);
        assert_eq!(g.num_actions(&2), 0);
    }

    #[test]
    fn positional_heuristics() {
        let mut g = ExplicitGraph::new(3);
        g.set_positions(vec![(0.0, 0.0), (3.0, 4.0), (6.0, 8.0)]);
        g.set_goal(1);
        assert_eq!(g.heuristic(&0), 5.0);
        assert_eq!(g.heuristic(&2), 5.0);
        assert_eq!(g.pairwise_heuristic(&0, &2), 10.0);
        assert_eq!(g.pairwise_heuristic(&2, &2), 0.0);
    }

    #[test]
    fn no_goals_gives_zero_heuristic() {
        let mut g = ExplicitGraph::new(2);
        g.set_positions(vec![(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(g.heuristic(&0), 0.0);
    }
}
