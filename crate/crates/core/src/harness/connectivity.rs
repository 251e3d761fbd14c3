use std::collections::VecDeque;

use serde::Serialize;

use crate::model::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    pub components: usize,
}

/// Breadth-first component count. The graph on zero vertices counts as
/// connected with no components.
pub fn connectivity_check(g: &Graph) -> Connectivity {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut components = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    Connectivity { connected: components <= 1, components }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(connectivity_check(&Graph::complete(6)), Connectivity { connected: true, components: 1 });
        assert_eq!(connectivity_check(&Graph::empty(5)).components, 5);
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(connectivity_check(&two), Connectivity { connected: false, components: 2 });
    }
}
