//! Bracket (NOR) circuits.
//!
//! The bracket of a list of bits is `[c1 ... cr] = 1 - max(c1, ..., cr)`,
//! with `[] = 1` by convention: exactly the NOR connective, which is
//! functionally complete. Expressions are trees over tape-cell leaves; a
//! leaf with shift `j` denotes the cell `j` steps to the left of the current
//! one. Flattening an expression yields a gate list whose levels become the
//! rows of a modular game.

use crate::cellular::{CARule, RuleError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("shift {0} is not bound by the assignment")]
    UnboundShift(usize),
    #[error("expression root must be a bracket, not a bare leaf")]
    LeafAtRoot,
    #[error("shift {shift} exceeds the arity {arity}")]
    ShiftOutOfRange { shift: usize, arity: usize },
    #[error("expression is constant 1 on the all-zero input, violating f(0,...,0) = 0")]
    OriginNotZero,
    #[error("invalid rule: {0}")]
    InvalidRule(#[from] RuleError),
    #[error("gate {gate} child references gate {child}, which is not earlier")]
    ForwardGateReference { gate: usize, child: usize },
    #[error("a gate list needs at least one gate")]
    EmptyGateList,
}

/// A bracket expression: a leaf referencing a tape cell by shift, or a
/// bracket over an ordered list of children (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketExpr {
    /// The tape cell `j` steps to the left of the current one.
    Var(usize),
    /// `1 - max(children)`; the empty bracket is 1.
    Bracket(Vec<BracketExpr>),
}

impl BracketExpr {
    /// Bracket notation: variables as `x0`, `x1`, ... and brackets as
    /// `[...]`.
    pub fn to_notation(&self) -> String {
        match self {
            BracketExpr::Var(j) => format!("x{j}"),
            BracketExpr::Bracket(children) => {
                let inner: Vec<String> = children.iter().map(|c| c.to_notation()).collect();
                format!("[{}]", inner.join(" "))
            }
        }
    }
}

/// Evaluates an expression; `assignment[j]` is the value of shift `j`.
pub fn eval_bracket(expr: &BracketExpr, assignment: &[bool]) -> Result<bool, CircuitError> {
    match expr {
        BracketExpr::Var(j) => assignment
            .get(*j)
            .copied()
            .ok_or(CircuitError::UnboundShift(*j)),
        BracketExpr::Bracket(children) => {
            let mut any = false;
            for c in children {
                any |= eval_bracket(c, assignment)?;
            }
            Ok(!any)
        }
    }
}

/// Input of a gate: an earlier gate or a tape-cell shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateInput {
    Gate(usize),
    Var(usize),
}

/// A flattened circuit: gates in topological order, each a bracket over
/// earlier gates and variable shifts. The last gate is the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateList {
    gates: Vec<Vec<GateInput>>,
}

impl GateList {
    pub fn new(gates: Vec<Vec<GateInput>>) -> Result<Self, CircuitError> {
        if gates.is_empty() {
            return Err(CircuitError::EmptyGateList);
        }
        for (g, children) in gates.iter().enumerate() {
            for child in children {
                if let GateInput::Gate(c) = child {
                    if *c >= g {
                        return Err(CircuitError::ForwardGateReference { gate: g, child: *c });
                    }
                }
            }
        }
        Ok(GateList { gates })
    }

    /// Number of gates `K`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid gate list has at least one gate
    }

    pub fn gate(&self, index: usize) -> &[GateInput] {
        &self.gates[index]
    }

    pub fn gates(&self) -> &[Vec<GateInput>] {
        &self.gates
    }

    /// Evaluates the whole list bottom-up and returns the output gate value.
    pub fn eval(&self, assignment: &[bool]) -> Result<bool, CircuitError> {
        let mut values = Vec::with_capacity(self.gates.len());
        for children in &self.gates {
            let mut any = false;
            for child in children {
                any |= match child {
                    GateInput::Gate(g) => values[*g],
                    GateInput::Var(j) => assignment
                        .get(*j)
                        .copied()
                        .ok_or(CircuitError::UnboundShift(*j))?,
                };
            }
            values.push(!any);
        }
        Ok(*values.last().unwrap())
    }

    /// Largest variable shift referenced anywhere, or `None` if the circuit
    /// reads no cells.
    pub fn max_shift(&self) -> Option<usize> {
        self.gates
            .iter()
            .flatten()
            .filter_map(|c| match c {
                GateInput::Var(j) => Some(*j),
                GateInput::Gate(_) => None,
            })
            .max()
    }
}

/// Flattens an expression into a gate list.
///
/// The canonical order is by depth, deepest nodes first, left to right within
/// one depth; the root comes last as the output gate. Structurally identical
/// subtrees at distinct positions are NOT merged (each occurrence gets its
/// own gate), though one gate may feed several parents.
pub fn gates_from_expr(expr: &BracketExpr) -> Result<GateList, CircuitError> {
    if matches!(expr, BracketExpr::Var(_)) {
        return Err(CircuitError::LeafAtRoot);
    }

    // Collect bracket nodes level by level (breadth-first keeps left-to-right
    // order within each depth).
    let mut by_depth: Vec<Vec<&BracketExpr>> = vec![vec![expr]];
    let mut frontier: Vec<&BracketExpr> = vec![expr];
    loop {
        let mut next = Vec::new();
        for node in &frontier {
            if let BracketExpr::Bracket(children) = node {
                for c in children {
                    if matches!(c, BracketExpr::Bracket(_)) {
                        next.push(c);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        by_depth.push(next.clone());
        frontier = next;
    }

    // Deepest level first; the root's level comes last.
    let order: Vec<&BracketExpr> = by_depth.iter().rev().flatten().copied().collect();
    let index_of = |node: &BracketExpr| -> usize {
        order
            .iter()
            .position(|&n| std::ptr::eq(n, node))
            .expect("child node missing from traversal")
    };

    let mut gates = Vec::with_capacity(order.len());
    for node in &order {
        let BracketExpr::Bracket(node_children) = node else {
            unreachable!("only brackets are collected")
        };
        let inputs = node_children
            .iter()
            .map(|c| match c {
                BracketExpr::Var(j) => GateInput::Var(*j),
                BracketExpr::Bracket(_) => GateInput::Gate(index_of(c)),
            })
            .collect();
        gates.push(inputs);
    }
    GateList::new(gates)
}

/// Synthesizes a bracket expression with the rule's truth table: the
/// disjunctive normal form of `f`, with the OR of minterms as a double
/// bracket and each minterm as a bracket of inverted-or-bare literals. No
/// minimization is attempted; the gate count (and hence the modulus of a
/// compiled game) grows with the number of minterms.
pub fn bracket_from_rule(rule: &CARule) -> BracketExpr {
    let n = rule.arity();
    let mut minterms = Vec::new();
    for index in 0..(1usize << n) {
        if !rule.apply(index) {
            continue;
        }
        // Bit j of the index is the value of shift j.
        let literals = (0..n)
            .map(|j| {
                if index >> j & 1 != 0 {
                    // Positive literal: [x] is 0 exactly when x is 1.
                    BracketExpr::Bracket(vec![BracketExpr::Var(j)])
                } else {
                    BracketExpr::Var(j)
                }
            })
            .collect();
        minterms.push(BracketExpr::Bracket(literals));
    }
    // [[m1 ... mr]] = OR of the minterms; [[]] is constant 0.
    BracketExpr::Bracket(vec![BracketExpr::Bracket(minterms)])
}

/// Tabulates an expression over all `2^n` assignments, producing a rule.
/// Fails if a shift is out of range or the resulting table has
/// `f(0,...,0) = 1`.
pub fn rule_from_bracket(expr: &BracketExpr, n: usize) -> Result<CARule, CircuitError> {
    let mut table = Vec::with_capacity(1 << n);
    for index in 0..(1usize << n) {
        let assignment: Vec<bool> = (0..n).map(|j| index >> j & 1 != 0).collect();
        let value = match eval_bracket(expr, &assignment) {
            Ok(v) => v,
            Err(CircuitError::UnboundShift(shift)) => {
                return Err(CircuitError::ShiftOutOfRange { shift, arity: n })
            }
            Err(e) => return Err(e),
        };
        table.push(value);
    }
    if table[0] {
        return Err(CircuitError::OriginNotZero);
    }
    Ok(CARule::new(n, table).expect("table length and origin already checked"))
}

/// The five-gate xor expression `[[xy][[x][y]]]`, with `x` one cell left of
/// `y`: the canonical worked example whose compiled modular game has modulus
/// five.
pub fn xor_expr() -> BracketExpr {
    use BracketExpr::{Bracket, Var};
    Bracket(vec![
        Bracket(vec![Var(1), Var(0)]),
        Bracket(vec![Bracket(vec![Var(1)]), Bracket(vec![Var(0)])]),
    ])
}
