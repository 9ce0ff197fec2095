//! The first-in-last-out path stack from the start state to the current one.

use crate::problem::StateId;

/// Path stack σ: bottom element is the start state, top is the current state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackPath {
    states: Vec<StateId>,
}

impl StackPath {
    pub fn new(start: StateId) -> Self {
        StackPath {
            states: vec![start],
        }
    }

    pub fn from_states(states: Vec<StateId>) -> Self {
        assert!(
            !states.is_empty(),
            "stack must hold at least the start state"
        );
        StackPath { states }
    }

    pub fn top(&self) -> StateId {
        *self.states.last().unwrap()
    }

    pub fn bottom(&self) -> StateId {
        self.states[0]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false // never: the start state is always present
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn push(&mut self, s: StateId) {
        self.states.push(s);
    }

    /// Pops the top state. The start state cannot be popped.
    pub fn pop(&mut self) -> StateId {
        assert!(self.states.len() > 1, "cannot pop the start state");
        self.states.pop().unwrap()
    }

    /// Truncates the stack so that `index` becomes the top.
    pub fn pop_to(&mut self, index: usize) {
        assert!(index < self.states.len());
        self.states.truncate(index + 1);
    }

    /// Position of the deepest occurrence of `s`, if it is on the stack.
    pub fn find(&self, s: StateId) -> Option<usize> {
        self.states.iter().position(|&x| x == s)
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.states.contains(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_pop_keeps_bottom() {
        let mut st = StackPath::new(StateId(2));
        st.push(StateId(3));
        st.push(StateId(2));
        assert_eq!(st.len(), 3);
        assert_eq!(st.bottom(), StateId(2));
        assert_eq!(st.pop(), StateId(2));
        assert_eq!(st.top(), StateId(3));
    }

    #[test]
    fn pop_to_truncates() {
        let mut st = StackPath::from_states(vec![StateId(0), StateId(1), StateId(2), StateId(3)]);
        st.pop_to(1);
        assert_eq!(st.states(), &[StateId(0), StateId(1)]);
    }

    #[test]
    #[should_panic]
    fn popping_start_panics() {
        let mut st = StackPath::new(StateId(0));
        st.pop();
    }
}
