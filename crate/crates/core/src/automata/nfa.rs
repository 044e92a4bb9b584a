use std::collections::VecDeque;
use std::sync::Arc;

use super::{Alphabet, AutomataError, Regex, Symbol, Word};

pub type StateId = usize;

/// An epsilon-free NFA, trimmed to states that are reachable and can still accept.
///
/// Transitions of each state are sorted by the letter's alphabet rank, then target.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: Arc<Alphabet>,
    transitions: Vec<Vec<(Symbol, StateId)>>,
    start: StateId,
    accepting: Vec<bool>,
    first: Vec<Symbol>,
    thompson_states: usize,
}

#[derive(Default)]
struct Thompson {
    eps: Vec<Vec<StateId>>,
    sym: Vec<Vec<(Symbol, StateId)>>,
}

impl Thompson {
    fn state(&mut self) -> StateId {
        self.eps.push(Vec::new());
        self.sym.push(Vec::new());
        self.eps.len() - 1
    }

    /// Returns (entry, exit) of the fragment for `r`.
    fn build(&mut self, r: &Regex) -> (StateId, StateId) {
        match r {
            Regex::Empty => (self.state(), self.state()),
            Regex::Epsilon => {
                let (s, f) = (self.state(), self.state());
                self.eps[s].push(f);
                (s, f)
            }
            Regex::Lit(a) => {
                let (s, f) = (self.state(), self.state());
                self.sym[s].push((*a, f));
                (s, f)
            }
            Regex::Class(set) => {
                let (s, f) = (self.state(), self.state());
                self.sym[s].extend(set.iter().map(|a| (*a, f)));
                (s, f)
            }
            Regex::Union(a, b) => {
                let (s, f) = (self.state(), self.state());
                let (sa, fa) = self.build(a);
                let (sb, fb) = self.build(b);
                self.eps[s].extend([sa, sb]);
                self.eps[fa].push(f);
                self.eps[fb].push(f);
                (s, f)
            }
            Regex::Concat(a, b) => {
                let (sa, fa) = self.build(a);
                let (sb, fb) = self.build(b);
                self.eps[fa].push(sb);
                (sa, fb)
            }
            Regex::Star(a) => {
                let (s, f) = (self.state(), self.state());
                let (sa, fa) = self.build(a);
                self.eps[s].extend([sa, f]);
                self.eps[fa].extend([sa, f]);
                (s, f)
            }
            Regex::Plus(a) => {
                let (s, f) = (self.state(), self.state());
                let (sa, fa) = self.build(a);
                self.eps[s].push(sa);
                self.eps[fa].extend([sa, f]);
                (s, f)
            }
        }
    }

    fn closure(&self, q: StateId) -> Vec<StateId> {
        let mut seen = vec![false; self.eps.len()];
        let mut stack = vec![q];
        let mut out = Vec::new();
        seen[q] = true;
        while let Some(p) = stack.pop() {
            out.push(p);
            for &n in &self.eps[p] {
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        out
    }
}

impl Nfa {
    /// Thompson construction followed by epsilon elimination and trimming.
    pub fn compile(regex: &Regex, alphabet: Arc<Alphabet>) -> Result<Nfa, AutomataError> {
        if let Some(s) = regex.symbols().into_iter().find(|s| !alphabet.contains(*s)) {
            return Err(AutomataError::ForeignSymbol(s.to_string()));
        }
        let mut t = Thompson::default();
        let (entry, exit) = t.build(regex);
        let thompson_states = t.eps.len();

        // Epsilon elimination over the closure of every state.
        let n = thompson_states;
        let mut trans: Vec<Vec<(Symbol, StateId)>> = vec![Vec::new(); n];
        let mut accepting = vec![false; n];
        for q in 0..n {
            for p in t.closure(q) {
                if p == exit {
                    accepting[q] = true;
                }
                trans[q].extend(t.sym[p].iter().copied());
            }
        }
        Ok(Nfa::trimmed(alphabet, trans, entry, accepting, thompson_states))
    }

    fn trimmed(
        alphabet: Arc<Alphabet>,
        trans: Vec<Vec<(Symbol, StateId)>>,
        start: StateId,
        accepting: Vec<bool>,
        thompson_states: usize,
    ) -> Nfa {
        let n = trans.len();
        // Co-reachability: states that can reach an accepting state.
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (q, edges) in trans.iter().enumerate() {
            for &(_, p) in edges {
                rev[p].push(q);
            }
        }
        let mut useful = accepting.clone();
        let mut queue: VecDeque<StateId> = (0..n).filter(|&q| accepting[q]).collect();
        while let Some(p) = queue.pop_front() {
            for &q in &rev[p] {
                if !useful[q] {
                    useful[q] = true;
                    queue.push_back(q);
                }
            }
        }
        // Renumber reachable useful states in breadth-first order from the start.
        let mut id = vec![usize::MAX; n];
        let mut order = vec![start];
        id[start] = 0;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            if !useful[q] {
                continue;
            }
            let mut edges = trans[q].clone();
            edges.sort_by_key(|(s, p)| (alphabet.rank(*s), *p));
            for (_, p) in edges {
                if useful[p] && id[p] == usize::MAX {
                    id[p] = order.len();
                    order.push(p);
                }
            }
        }
        let mut transitions = Vec::with_capacity(order.len());
        let mut acc = Vec::with_capacity(order.len());
        for &q in &order {
            let mut edges: Vec<(Symbol, StateId)> = if useful[q] {
                trans[q]
                    .iter()
                    .filter(|(_, p)| useful[*p])
                    .map(|(s, p)| (*s, id[*p]))
                    .collect()
            } else {
                Vec::new()
            };
            edges.sort_by_key(|(s, p)| (alphabet.rank(*s), *p));
            edges.dedup();
            transitions.push(edges);
            acc.push(accepting[q]);
        }
        let mut first: Vec<Symbol> = transitions[0].iter().map(|(s, _)| *s).collect();
        first.dedup();
        Nfa {
            alphabet,
            transitions,
            start: 0,
            accepting: acc,
            first,
            thompson_states,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    /// State count of the Thompson automaton before epsilon elimination.
    pub fn thompson_state_count(&self) -> usize {
        self.thompson_states
    }

    pub fn transitions(&self, q: StateId) -> &[(Symbol, StateId)] {
        &self.transitions[q]
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    /// Letters that can begin an accepted word.
    pub fn first_symbols(&self) -> &[Symbol] {
        &self.first
    }

    pub fn accepts_epsilon(&self) -> bool {
        self.accepting[self.start]
    }

    pub fn is_empty(&self) -> bool {
        !self.accepting[self.start] && self.transitions[self.start].is_empty()
    }

    fn step(&self, states: &[StateId], a: Symbol) -> Vec<StateId> {
        let mut next: Vec<StateId> = states
            .iter()
            .flat_map(|&q| self.transitions[q].iter())
            .filter(|(s, _)| *s == a)
            .map(|(_, p)| *p)
            .collect();
        next.sort_unstable();
        next.dedup();
        next
    }

    pub fn accepts(&self, word: &Word) -> Result<bool, AutomataError> {
        if let Some(s) = word.iter().find(|s| !self.alphabet.contains(**s)) {
            return Err(AutomataError::ForeignSymbol(s.to_string()));
        }
        let mut current = vec![self.start];
        for &a in word.iter() {
            current = self.step(&current, a);
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(current.iter().any(|&q| self.accepting[q]))
    }

    /// `table[k][q]`: some word of length exactly `k` leads from `q` to acceptance.
    fn exact_length_table(&self, max_len: usize) -> Vec<Vec<bool>> {
        let mut table = vec![self.accepting.clone()];
        for k in 1..=max_len {
            let prev = &table[k - 1];
            let row = self
                .transitions
                .iter()
                .map(|edges| edges.iter().any(|(_, p)| prev[*p]))
                .collect();
            table.push(row);
        }
        table
    }

    /// Successor sets grouped by letter, in alphabet order.
    fn successors(&self, states: &[StateId]) -> Vec<(Symbol, Vec<StateId>)> {
        let mut edges: Vec<(usize, Symbol, StateId)> = states
            .iter()
            .flat_map(|&q| self.transitions[q].iter())
            .map(|(s, p)| (self.alphabet.rank(*s).unwrap_or(usize::MAX), *s, *p))
            .collect();
        edges.sort_unstable_by_key(|(r, _, p)| (*r, *p));
        let mut out: Vec<(Symbol, Vec<StateId>)> = Vec::new();
        for (_, s, p) in edges {
            match out.last_mut() {
                Some((last, set)) if *last == s => {
                    if set.last() != Some(&p) {
                        set.push(p);
                    }
                }
                _ => out.push((s, vec![p])),
            }
        }
        out
    }

    /// All accepted words of length at most `max_len`, in shortlex order.
    pub fn enumerate_words(&self, max_len: usize) -> Vec<Word> {
        self.enumerate_limited(max_len, usize::MAX)
    }

    /// The first `limit` accepted words of length at most `max_len`, in shortlex order.
    pub fn enumerate_limited(&self, max_len: usize, limit: usize) -> Vec<Word> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        let table = self.exact_length_table(max_len);
        let mut prefix = Vec::new();
        for len in 0..=max_len {
            if !table[len][self.start] {
                continue;
            }
            self.enumerate_exact(&[self.start], len, &table, &mut prefix, &mut out, limit);
            if out.len() >= limit {
                break;
            }
        }
        out
    }

    fn enumerate_exact(
        &self,
        states: &[StateId],
        remaining: usize,
        table: &[Vec<bool>],
        prefix: &mut Vec<Symbol>,
        out: &mut Vec<Word>,
        limit: usize,
    ) {
        if remaining == 0 {
            if states.iter().any(|&q| self.accepting[q]) {
                out.push(Word(prefix.clone()));
            }
            return;
        }
        for (a, next) in self.successors(states) {
            if !next.iter().any(|&q| table[remaining - 1][q]) {
                continue;
            }
            prefix.push(a);
            self.enumerate_exact(&next, remaining - 1, table, prefix, out, limit);
            prefix.pop();
            if out.len() >= limit {
                return;
            }
        }
    }

    /// The shortlex-least among the shortest accepted words.
    pub fn shortest_word(&self) -> Option<Word> {
        let mut dist = vec![usize::MAX; self.state_count()];
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); self.state_count()];
        for (q, edges) in self.transitions.iter().enumerate() {
            for (_, p) in edges {
                rev[*p].push(q);
            }
        }
        let mut queue = VecDeque::new();
        for (q, &acc) in self.accepting.iter().enumerate() {
            if acc {
                dist[q] = 0;
                queue.push_back(q);
            }
        }
        while let Some(p) = queue.pop_front() {
            for &q in &rev[p] {
                if dist[q] == usize::MAX {
                    dist[q] = dist[p] + 1;
                    queue.push_back(q);
                }
            }
        }
        let len = dist[self.start];
        if len == usize::MAX {
            return None;
        }
        let table = self.exact_length_table(len);
        let mut states = vec![self.start];
        let mut letters = Vec::with_capacity(len);
        for remaining in (1..=len).rev() {
            let (a, next) = self
                .successors(&states)
                .into_iter()
                .find(|(_, next)| next.iter().any(|&q| table[remaining - 1][q]))
                .expect("distance table guarantees a live successor");
            letters.push(a);
            states = next;
        }
        Some(Word(letters))
    }
}
