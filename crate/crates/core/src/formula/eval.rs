//! Tarskian evaluation over word structures.
//!
//! Every quantifier ranges over positions `1..=|w|`. Subformulas are
//! interned up to renaming of variables, and two engines share that
//! interning:
//!
//! * top-down: naive recursive search, memoized per quantifier node on the
//!   values of its free variables;
//! * tables: bottom-up truth tables over each node's free variables, used
//!   when every table fits in [`TABLE_LIMIT`] cells.
//!
//! Both give identical answers; [`Engine::Auto`] picks tables when they fit.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::atomic::{AtomicU64, Ordering};

use smallvec::SmallVec;

use super::{Formula, Var};
use crate::error::{Error, Result};
use crate::words::Word;

type Vals = SmallVec<[u32; 8]>;

const DENSE_LIMIT: u64 = 1 << 22;

/// Largest truth table the table engine will build for one node.
pub const TABLE_LIMIT: u64 = 1 << 22;

/// Evaluation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Auto,
    TopDown,
    Tables,
}

static NEXT_EVALUATOR: AtomicU64 = AtomicU64::new(0);

/// Map from variables to 1-based positions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, usize>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn with(mut self, var: Var, pos: usize) -> Self {
        self.0.insert(var, pos);
        self
    }

    pub fn insert(&mut self, var: Var, pos: usize) {
        self.0.insert(var, pos);
    }

    pub fn get(&self, var: Var) -> Option<usize> {
        self.0.get(&var).copied()
    }
}

impl FromIterator<(Var, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, usize)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// Does `w, env ⊨ phi`?
pub fn evaluate(w: &Word, phi: &Formula, env: &Assignment) -> Result<bool> {
    let mut ev = Evaluator::new(w);
    let compiled = ev.compile(phi);
    ev.check(&compiled, env)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Arg {
    Free(u16),
    Bound,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Lt(u16, u16),
    Eq(u16, u16),
    Letter(char, u16),
    True,
    False,
    Not(u32, Vec<Arg>),
    And(Vec<(u32, Vec<Arg>)>),
    Or(Vec<(u32, Vec<Arg>)>),
    Exists(u32, Vec<Arg>),
    Forall(u32, Vec<Arg>),
}

#[derive(Debug)]
struct Child {
    node: u32,
    args: Vec<Arg>,
}

#[derive(Debug)]
enum Kind {
    Lt(u16, u16),
    Eq(u16, u16),
    Letter(char, u16),
    True,
    False,
    Not(Child),
    And(Vec<Child>),
    Or(Vec<Child>),
    Exists(Child),
    Forall(Child),
}

#[derive(Debug)]
struct Node {
    class: u32,
    arity: usize,
    kind: Kind,
}

/// A formula lowered for one [`Evaluator`].
#[derive(Debug)]
pub struct CompiledFormula {
    owner: u64,
    nodes: Vec<Node>,
    root: u32,
    root_free: Vec<Var>,
    /// Largest number of variables any node's table ranges over.
    max_dim: usize,
}

impl CompiledFormula {
    pub fn free_vars(&self) -> &[Var] {
        &self.root_free
    }
}

enum Memo {
    Dense(Vec<u8>),
    Sparse(HashMap<Vals, bool>),
}

/// Reusable model checker bound to one word at a time.
pub struct Evaluator<'w> {
    id: u64,
    word: &'w Word,
    classes: HashMap<Key, u32>,
    memo: Vec<Option<Memo>>,
    tables: Vec<Option<Rc<Vec<bool>>>>,
}

impl<'w> Evaluator<'w> {
    pub fn new(word: &'w Word) -> Self {
        Evaluator {
            id: NEXT_EVALUATOR.fetch_add(1, Ordering::Relaxed),
            word,
            classes: HashMap::new(),
            memo: Vec::new(),
            tables: Vec::new(),
        }
    }

    /// Rebinds to another word, keeping compiled formulas valid.
    pub fn set_word(&mut self, word: &'w Word) {
        self.word = word;
        self.memo.iter_mut().for_each(|m| *m = None);
        self.tables.iter_mut().for_each(|t| *t = None);
    }

    pub fn compile(&mut self, phi: &Formula) -> CompiledFormula {
        let mut nodes = Vec::new();
        let (root, root_free) = self.lower(phi, &mut nodes);
        let max_dim = nodes
            .iter()
            .map(|n| n.arity + usize::from(matches!(n.kind, Kind::Exists(_) | Kind::Forall(_))))
            .max()
            .unwrap_or(0);
        CompiledFormula { owner: self.id, nodes, root, root_free, max_dim }
    }

    pub fn check(&mut self, compiled: &CompiledFormula, env: &Assignment) -> Result<bool> {
        self.check_with(compiled, env, Engine::Auto)
    }

    pub fn check_with(&mut self, compiled: &CompiledFormula, env: &Assignment, engine: Engine) -> Result<bool> {
        if compiled.owner != self.id {
            return Err(Error::Internal("formula compiled by a different evaluator".into()));
        }
        let len = self.word.len();
        let mut vals = Vals::new();
        for &v in &compiled.root_free {
            let pos = env.get(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
            if pos == 0 || pos > len {
                return Err(Error::PositionOutOfRange { var: v.to_string(), pos, len });
            }
            vals.push(pos as u32);
        }
        let use_tables = match engine {
            Engine::TopDown => false,
            Engine::Tables => true,
            Engine::Auto => {
                (len as u64).checked_pow(compiled.max_dim as u32).is_some_and(|c| c <= TABLE_LIMIT)
            }
        };
        if use_tables {
            let table = self.table(compiled, compiled.root);
            Ok(table[self.dense_index(&vals)])
        } else {
            Ok(self.eval(compiled, compiled.root, &vals))
        }
    }

    fn intern(&mut self, key: Key) -> u32 {
        let next = self.classes.len() as u32;
        *self.classes.entry(key).or_insert(next)
    }

    fn lower(&mut self, phi: &Formula, nodes: &mut Vec<Node>) -> (u32, Vec<Var>) {
        fn slot(free: &mut Vec<Var>, v: Var) -> u16 {
            match free.iter().position(|&f| f == v) {
                Some(i) => i as u16,
                None => {
                    free.push(v);
                    (free.len() - 1) as u16
                }
            }
        }
        fn args_into(child_free: &[Var], free: &mut Vec<Var>, bound: Option<Var>) -> Vec<Arg> {
            child_free
                .iter()
                .map(|&v| if Some(v) == bound { Arg::Bound } else { Arg::Free(slot(free, v)) })
                .collect()
        }

        let mut free = Vec::new();
        let (key, kind) = match phi {
            Formula::Lt(x, y) => {
                let (a, b) = (slot(&mut free, *x), slot(&mut free, *y));
                (Key::Lt(a, b), Kind::Lt(a, b))
            }
            Formula::Eq(x, y) => {
                let (a, b) = (slot(&mut free, *x), slot(&mut free, *y));
                (Key::Eq(a, b), Kind::Eq(a, b))
            }
            Formula::Letter(c, x) => {
                let a = slot(&mut free, *x);
                (Key::Letter(*c, a), Kind::Letter(*c, a))
            }
            Formula::True => (Key::True, Kind::True),
            Formula::False => (Key::False, Kind::False),
            Formula::Not(g) => {
                let (node, cf) = self.lower(g, nodes);
                let args = args_into(&cf, &mut free, None);
                (Key::Not(nodes[node as usize].class, args.clone()), Kind::Not(Child { node, args }))
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let mut keys = Vec::with_capacity(gs.len());
                let mut children = Vec::with_capacity(gs.len());
                for g in gs {
                    let (node, cf) = self.lower(g, nodes);
                    let args = args_into(&cf, &mut free, None);
                    keys.push((nodes[node as usize].class, args.clone()));
                    children.push(Child { node, args });
                }
                if matches!(phi, Formula::And(_)) {
                    (Key::And(keys), Kind::And(children))
                } else {
                    (Key::Or(keys), Kind::Or(children))
                }
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let (node, cf) = self.lower(g, nodes);
                let args = args_into(&cf, &mut free, Some(*v));
                let class = nodes[node as usize].class;
                if matches!(phi, Formula::Exists(..)) {
                    (Key::Exists(class, args.clone()), Kind::Exists(Child { node, args }))
                } else {
                    (Key::Forall(class, args.clone()), Kind::Forall(Child { node, args }))
                }
            }
        };
        let class = self.intern(key);
        nodes.push(Node { class, arity: free.len(), kind });
        ((nodes.len() - 1) as u32, free)
    }

    fn child_vals(args: &[Arg], vals: &[u32], bound: u32) -> Vals {
        args.iter()
            .map(|a| match a {
                Arg::Free(i) => vals[usize::from(*i)],
                Arg::Bound => bound,
            })
            .collect()
    }

    fn dense_index(&self, vals: &[u32]) -> usize {
        let m = self.word.len();
        vals.iter().rev().fold(0usize, |acc, &v| acc * m + (v as usize - 1))
    }

    fn lookup(&mut self, class: u32, arity: usize, vals: &[u32]) -> Option<bool> {
        let idx = class as usize;
        if self.memo.len() <= idx {
            self.memo.resize_with(idx + 1, || None);
        }
        if self.memo[idx].is_none() {
            let cells = (self.word.len() as u64).checked_pow(arity as u32).unwrap_or(u64::MAX);
            self.memo[idx] = Some(if cells <= DENSE_LIMIT {
                Memo::Dense(vec![0; cells as usize])
            } else {
                Memo::Sparse(HashMap::new())
            });
        }
        match self.memo[idx].as_ref().unwrap() {
            Memo::Dense(cells) => match cells[self.dense_index(vals)] {
                0 => None,
                c => Some(c == 2),
            },
            Memo::Sparse(map) => map.get(vals).copied(),
        }
    }

    fn store(&mut self, class: u32, vals: &[u32], value: bool) {
        let di = match self.memo[class as usize] {
            Some(Memo::Dense(_)) => self.dense_index(vals),
            _ => 0,
        };
        match self.memo[class as usize].as_mut().unwrap() {
            Memo::Dense(cells) => cells[di] = if value { 2 } else { 1 },
            Memo::Sparse(map) => {
                map.insert(vals.into(), value);
            }
        }
    }

    fn table(&mut self, cf: &CompiledFormula, node: u32) -> Rc<Vec<bool>> {
        let n = &cf.nodes[node as usize];
        let class = n.class as usize;
        if let Some(Some(t)) = self.tables.get(class) {
            return Rc::clone(t);
        }
        let m = self.word.len();
        let k = n.arity;
        let cells = m.pow(k as u32);
        let out: Vec<bool> = match &n.kind {
            Kind::Lt(a, b) => self.atom_table(k, |d| d[usize::from(*a)] < d[usize::from(*b)]),
            Kind::Eq(a, b) => self.atom_table(k, |d| d[usize::from(*a)] == d[usize::from(*b)]),
            Kind::Letter(c, a) => {
                let word = self.word;
                self.atom_table(k, |d| word.symbol_at(d[usize::from(*a)] + 1) == *c)
            }
            Kind::True => vec![true; cells],
            Kind::False => vec![false; cells],
            Kind::Not(ch) => {
                let t = self.table(cf, ch.node);
                gather(m, k, &ch.args, k).map(|i| !t[i]).collect()
            }
            Kind::And(children) | Kind::Or(children) => {
                let conj = matches!(n.kind, Kind::And(_));
                let mut acc = vec![conj; cells];
                for ch in children {
                    let t = self.table(cf, ch.node);
                    for (cell, i) in acc.iter_mut().zip(gather(m, k, &ch.args, k)) {
                        if conj {
                            *cell &= t[i];
                        } else {
                            *cell |= t[i];
                        }
                    }
                }
                acc
            }
            Kind::Exists(ch) | Kind::Forall(ch) => {
                let universal = matches!(n.kind, Kind::Forall(_));
                let t = self.table(cf, ch.node);
                // Project straight out of the child's table when its slots are
                // the parent's with the bound variable inserted at one place;
                // otherwise regather with the bound variable slowest.
                let (body, slot) = match inserted_slot(&ch.args, k) {
                    Some(slot) => (t, slot),
                    None => (Rc::new(gather(m, k + 1, &ch.args, k).map(|i| t[i]).collect()), k),
                };
                let inner = m.pow(slot as u32);
                let outer = m.pow((k - slot) as u32);
                let mut acc = vec![universal; cells];
                for o in 0..outer {
                    for i in 0..inner {
                        if (0..m).any(|z| body[(o * m + z) * inner + i] != universal) {
                            acc[o * inner + i] = !universal;
                        }
                    }
                }
                acc
            }
        };
        let out = Rc::new(out);
        if self.tables.len() <= class {
            self.tables.resize_with(class + 1, || None);
        }
        self.tables[class] = Some(Rc::clone(&out));
        out
    }

    /// Table of an atom over `k` slots; `f` sees 0-based positions.
    fn atom_table(&self, k: usize, f: impl Fn(&[usize]) -> bool) -> Vec<bool> {
        let m = self.word.len();
        let cells = m.pow(k as u32);
        let mut digits = vec![0usize; k];
        let mut out = Vec::with_capacity(cells);
        for _ in 0..cells {
            out.push(f(&digits));
            for d in digits.iter_mut() {
                *d += 1;
                if *d < m {
                    break;
                }
                *d = 0;
            }
        }
        out
    }

    fn eval(&mut self, cf: &CompiledFormula, node: u32, vals: &[u32]) -> bool {
        let n = &cf.nodes[node as usize];
        match &n.kind {
            Kind::Lt(a, b) => vals[usize::from(*a)] < vals[usize::from(*b)],
            Kind::Eq(a, b) => vals[usize::from(*a)] == vals[usize::from(*b)],
            Kind::Letter(c, a) => self.word.symbol_at(vals[usize::from(*a)] as usize) == *c,
            Kind::True => true,
            Kind::False => false,
            Kind::Not(ch) => {
                let cv = Self::child_vals(&ch.args, vals, 0);
                !self.eval(cf, ch.node, &cv)
            }
            Kind::And(children) => children.iter().all(|ch| {
                let cv = Self::child_vals(&ch.args, vals, 0);
                self.eval(cf, ch.node, &cv)
            }),
            Kind::Or(children) => children.iter().any(|ch| {
                let cv = Self::child_vals(&ch.args, vals, 0);
                self.eval(cf, ch.node, &cv)
            }),
            Kind::Exists(ch) | Kind::Forall(ch) => {
                let universal = matches!(n.kind, Kind::Forall(_));
                if let Some(v) = self.lookup(n.class, n.arity, vals) {
                    return v;
                }
                let m = self.word.len() as u32;
                let mut result = universal;
                for z in 1..=m {
                    let cv = Self::child_vals(&ch.args, vals, z);
                    if self.eval(cf, ch.node, &cv) != universal {
                        result = !universal;
                        break;
                    }
                }
                self.store(n.class, vals, result);
                result
            }
        }
    }
}

/// If `args` lists the parent slots `0..k` in order with `Arg::Bound`
/// inserted at one place, returns that place.
fn inserted_slot(args: &[Arg], k: usize) -> Option<usize> {
    if args.len() != k + 1 {
        return None;
    }
    let slot = args.iter().position(|a| *a == Arg::Bound)?;
    let in_order = args
        .iter()
        .filter_map(|a| match a {
            Arg::Free(i) => Some(usize::from(*i)),
            Arg::Bound => None,
        })
        .eq(0..k);
    in_order.then_some(slot)
}

/// Child-table index for every cell of a `dims`-slot parent table (slot 0
/// fastest). `Arg::Free(i)` maps to parent slot `i`, `Arg::Bound` to slot
/// `bound_slot`.
fn gather(m: usize, dims: usize, args: &[Arg], bound_slot: usize) -> impl Iterator<Item = usize> {
    let mut strides = vec![0usize; dims];
    let mut weight = 1usize;
    for a in args {
        let slot = match a {
            Arg::Free(i) => usize::from(*i),
            Arg::Bound => bound_slot,
        };
        strides[slot] += weight;
        weight *= m;
    }
    let cells = m.pow(dims as u32);
    let mut digits = vec![0usize; dims];
    let mut idx = 0usize;
    (0..cells).map(move |_| {
        let current = idx;
        for s in 0..dims {
            digits[s] += 1;
            if digits[s] < m {
                idx += strides[s];
                break;
            }
            digits[s] = 0;
            idx -= strides[s] * (m - 1);
        }
        current
    })
}
