use std::fmt;

/// The six token kinds of a command sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CommandType {
    Sol,
    Line,
    Arc,
    Circle,
    Extrude,
    Eos,
}

impl CommandType {
    pub const ALL: [CommandType; 6] = [
        CommandType::Sol,
        CommandType::Line,
        CommandType::Arc,
        CommandType::Circle,
        CommandType::Extrude,
        CommandType::Eos,
    ];

    /// The curve and feature types that carry parameters.
    pub const PARAMETRIC: [CommandType; 4] =
        [CommandType::Line, CommandType::Arc, CommandType::Circle, CommandType::Extrude];

    /// Spelling used inside the angle brackets of the text format.
    pub fn tag(self) -> &'static str {
        match self {
            CommandType::Sol => "SOL",
            CommandType::Line => "Line",
            CommandType::Arc => "Arc",
            CommandType::Circle => "Circle",
            CommandType::Extrude => "Extrude",
            CommandType::Eos => "EOS",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.tag().eq_ignore_ascii_case(tag))
    }

    pub fn is_curve(self) -> bool {
        matches!(self, CommandType::Line | CommandType::Arc | CommandType::Circle)
    }
}

impl fmt::Display for CommandType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// How an extrusion combines with the solid built so far.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BooleanOp {
    NewBody,
    Join,
    Cut,
    Intersect,
}

impl BooleanOp {
    pub const ALL: [BooleanOp; 4] = [BooleanOp::NewBody, BooleanOp::Join, BooleanOp::Cut, BooleanOp::Intersect];

    pub fn code(self) -> u8 {
        match self {
            BooleanOp::NewBody => 7,
            BooleanOp::Join => 8,
            BooleanOp::Cut => 9,
            BooleanOp::Intersect => 10,
        }
    }

    pub fn from_code(code: i64) -> Option<Self> {
        Self::ALL.into_iter().find(|op| i64::from(op.code()) == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            BooleanOp::NewBody => "NewBodyFeatureOperation",
            BooleanOp::Join => "JoinFeatureOperation",
            BooleanOp::Cut => "CutFeatureOperation",
            BooleanOp::Intersect => "IntersectFeatureOperation",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name() == name)
    }
}

/// Which side(s) of the sketch plane an extrusion occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtentType {
    OneSide,
    Symmetric,
    TwoSides,
}

impl ExtentType {
    pub const ALL: [ExtentType; 3] = [ExtentType::OneSide, ExtentType::Symmetric, ExtentType::TwoSides];

    pub fn code(self) -> u8 {
        match self {
            ExtentType::OneSide => 1,
            ExtentType::Symmetric => 2,
            ExtentType::TwoSides => 3,
        }
    }

    pub fn from_code(code: i64) -> Option<Self> {
        Self::ALL.into_iter().find(|e| i64::from(e.code()) == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            ExtentType::OneSide => "OneSideFeatureExtentType",
            ExtentType::Symmetric => "SymmetricFeatureExtentType",
            ExtentType::TwoSides => "TwoSidesFeatureExtentType",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }
}

/// Quantized parameters of an `<Extrude>` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Extrude {
    pub theta: u8,
    pub phi: u8,
    pub gamma: u8,
    pub px: u8,
    pub py: u8,
    pub pz: u8,
    pub s: u8,
    pub e1: u8,
    pub e2: u8,
    pub op: BooleanOp,
    pub extent: ExtentType,
}

impl Default for Extrude {
    /// Identity orientation at the origin, unit scale, zero distances.
    fn default() -> Self {
        Extrude {
            theta: 0,
            phi: 128,
            gamma: 128,
            px: 128,
            py: 128,
            pz: 128,
            s: 128,
            e1: 128,
            e2: 128,
            op: BooleanOp::NewBody,
            extent: ExtentType::OneSide,
        }
    }
}

/// One quantized command. Every numeric field is an integer in `[0, 255]`;
/// the `u8` representation makes out-of-range values unrepresentable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Sol,
    Line { x: u8, y: u8 },
    Arc { x: u8, y: u8, alpha: u8, ccw: bool },
    Circle { x: u8, y: u8, r: u8 },
    Extrude(Extrude),
    Eos,
}

impl Command {
    pub fn kind(&self) -> CommandType {
        match self {
            Command::Sol => CommandType::Sol,
            Command::Line { .. } => CommandType::Line,
            Command::Arc { .. } => CommandType::Arc,
            Command::Circle { .. } => CommandType::Circle,
            Command::Extrude(_) => CommandType::Extrude,
            Command::Eos => CommandType::Eos,
        }
    }

    /// Stored endpoint (or center, for circles) of a curve command.
    pub fn point(&self) -> Option<(u8, u8)> {
        match *self {
            Command::Line { x, y } | Command::Arc { x, y, .. } | Command::Circle { x, y, .. } => Some((x, y)),
            _ => None,
        }
    }

    /// Parameters in canonical order as `(name, quantized value)` pairs.
    /// Boolean and extent types are reported by their integer codes.
    pub fn params(&self) -> Vec<(ParamName, u8)> {
        use ParamName::*;
        match *self {
            Command::Sol | Command::Eos => Vec::new(),
            Command::Line { x, y } => vec![(X, x), (Y, y)],
            Command::Arc { x, y, alpha, ccw } => vec![(X, x), (Y, y), (Alpha, alpha), (F, ccw as u8)],
            Command::Circle { x, y, r } => vec![(X, x), (Y, y), (R, r)],
            Command::Extrude(e) => vec![
                (Theta, e.theta),
                (Phi, e.phi),
                (Gamma, e.gamma),
                (Px, e.px),
                (Py, e.py),
                (Pz, e.pz),
                (S, e.s),
                (E1, e.e1),
                (E2, e.e2),
                (B, e.op.code()),
                (U, e.extent.code()),
            ],
        }
    }
}

/// Parameter names of the command grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamName {
    X,
    Y,
    Alpha,
    F,
    R,
    Theta,
    Phi,
    Gamma,
    Px,
    Py,
    Pz,
    S,
    E1,
    E2,
    B,
    U,
}

impl ParamName {
    pub const ALL: [ParamName; 16] = [
        ParamName::X,
        ParamName::Y,
        ParamName::Alpha,
        ParamName::F,
        ParamName::R,
        ParamName::Theta,
        ParamName::Phi,
        ParamName::Gamma,
        ParamName::Px,
        ParamName::Py,
        ParamName::Pz,
        ParamName::S,
        ParamName::E1,
        ParamName::E2,
        ParamName::B,
        ParamName::U,
    ];

    pub fn ascii(self) -> &'static str {
        match self {
            ParamName::X => "x",
            ParamName::Y => "y",
            ParamName::Alpha => "alpha",
            ParamName::F => "f",
            ParamName::R => "r",
            ParamName::Theta => "theta",
            ParamName::Phi => "phi",
            ParamName::Gamma => "gamma",
            ParamName::Px => "px",
            ParamName::Py => "py",
            ParamName::Pz => "pz",
            ParamName::S => "s",
            ParamName::E1 => "e1",
            ParamName::E2 => "e2",
            ParamName::B => "b",
            ParamName::U => "u",
        }
    }

    /// Name emitted by the serializer (Greek letters for the angles).
    pub fn canonical(self) -> &'static str {
        match self {
            ParamName::Alpha => "α",
            ParamName::Theta => "θ",
            ParamName::Phi => "φ",
            ParamName::Gamma => "γ",
            other => other.ascii(),
        }
    }

    /// Accepts ASCII, Greek and LaTeX (`$\theta$`, `\varphi`) spellings.
    pub fn lookup(raw: &str) -> Option<Self> {
        let cleaned: String = raw.trim().chars().filter(|c| *c != '$' && *c != '\\').collect();
        match cleaned.as_str() {
            "α" | "alpha" => Some(ParamName::Alpha),
            "θ" | "ϑ" | "theta" => Some(ParamName::Theta),
            "φ" | "ϕ" | "phi" | "varphi" => Some(ParamName::Phi),
            "γ" | "gamma" => Some(ParamName::Gamma),
            other => Self::ALL.into_iter().find(|p| p.ascii() == other),
        }
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ascii())
    }
}

/// An ordered command sequence. Structural validity is not enforced on
/// construction; see [`crate::ccs::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CadSequence {
    commands: Vec<Command>,
}

impl CadSequence {
    pub fn new(commands: Vec<Command>) -> Self {
        CadSequence { commands }
    }

    pub fn commands(&self) -> &[Command] {
        &self.commands
    }

    pub fn into_commands(self) -> Vec<Command> {
        self.commands
    }

    pub fn len(&self) -> usize {
        self.commands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commands.is_empty()
    }

    pub fn push(&mut self, command: Command) {
        self.commands.push(command);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Command> {
        self.commands.iter()
    }
}

impl From<Vec<Command>> for CadSequence {
    fn from(commands: Vec<Command>) -> Self {
        CadSequence { commands }
    }
}

impl FromIterator<Command> for CadSequence {
    fn from_iter<I: IntoIterator<Item = Command>>(iter: I) -> Self {
        CadSequence { commands: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a CadSequence {
    type Item = &'a Command;
    type IntoIter = std::slice::Iter<'a, Command>;

    fn into_iter(self) -> Self::IntoIter {
        self.commands.iter()
    }
}
