//! Symbol table that fixes the meaning of each exponent slot.

/// Exponential weights are stored as integers scaled by this factor, so
/// `exp(x1/2)` has weight 1260 on `x1`.
pub const EXP_SCALE: i32 = 2520;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSym {
    pub name: String,
    pub positive: bool,
}

/// An opaque function of one coordinate. Slots hold `f`, `f'`, `f''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncSym {
    pub name: String,
    pub arg: usize,
    pub positive: bool,
}

/// Slot order: coordinate powers, parameter powers, function powers
/// (three per function), exponential weights (one per coordinate), extras.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Layout {
    pub coords: Vec<String>,
    pub params: Vec<ParamSym>,
    pub funcs: Vec<FuncSym>,
    pub extras: Vec<String>,
}

/// What a slot stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Coord(usize),
    Param(usize),
    Func { func: usize, order: usize },
    Exp(usize),
    Extra(usize),
}

impl Layout {
    pub fn new(coords: Vec<String>) -> Layout {
        Layout { coords, ..Default::default() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord_slot(&self, i: usize) -> usize {
        i
    }

    pub fn param_slot(&self, j: usize) -> usize {
        self.coords.len() + j
    }

    pub fn func_slot(&self, f: usize, order: usize) -> usize {
        self.coords.len() + self.params.len() + 3 * f + order
    }

    pub fn exp_offset(&self) -> usize {
        self.coords.len() + self.params.len() + 3 * self.funcs.len()
    }

    pub fn exp_slot(&self, i: usize) -> usize {
        self.exp_offset() + i
    }

    pub fn extra_slot(&self, j: usize) -> usize {
        self.exp_offset() + self.coords.len() + j
    }

    /// Number of slots excluding extras.
    pub fn base_width(&self) -> usize {
        self.exp_offset() + self.coords.len()
    }

    pub fn slot(&self, s: usize) -> Slot {
        let n = self.coords.len();
        let p = self.params.len();
        let m = self.funcs.len();
        if s < n {
            Slot::Coord(s)
        } else if s < n + p {
            Slot::Param(s - n)
        } else if s < n + p + 3 * m {
            let r = s - n - p;
            Slot::Func { func: r / 3, order: r % 3 }
        } else if s < 2 * n + p + 3 * m {
            Slot::Exp(s - n - p - 3 * m)
        } else {
            Slot::Extra(s - 2 * n - p - 3 * m)
        }
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn is_taken(&self, name: &str) -> bool {
        name == "exp"
            || self.coords.iter().any(|c| c == name)
            || self.params.iter().any(|p| p.name == name)
            || self.funcs.iter().any(|f| f.name == name)
            || self.extras.iter().any(|e| e == name)
    }
}
