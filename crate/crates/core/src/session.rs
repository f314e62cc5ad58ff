//! An interpreter with an optional object system preloaded.

use std::fmt;
use std::str::FromStr;

use crate::desugar::{self, KernelItem};
use crate::error::Error;
use crate::kernel::{print, Interp, TraceMode, Value, DEFAULT_MAX_DEPTH};
use crate::syntax;
use crate::{as_braid, asmi_braid, asmirs_braid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Braid {
    #[default]
    None,
    As,
    Asmi,
    Asmirs,
}

impl Braid {
    /// Top-level names a preloaded braid adds.
    pub fn names(self) -> &'static [&'static str] {
        match self {
            Braid::None => &[],
            Braid::As => &[
                "object", "oc", "cd", "cdc", "mc", "mcc", "class", "cc", "om", "cdm", "cdv", "mm",
                "cm", "objinit", "objdnu", "cdinit", "cdnew", "metasub", "classsub",
            ],
            Braid::Asmi => &[
                "object", "class", "om", "cm", "objinit", "objdnu", "objgc", "classinit",
                "classnew", "asnew", "asm", "asc",
            ],
            Braid::Asmirs => &[
                "object", "class", "om", "cm", "objinit", "objdnu", "classinit", "classon",
                "classnew", "classsend", "c",
            ],
        }
    }
}

impl FromStr for Braid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Braid::None),
            "as" => Ok(Braid::As),
            "asmi" => Ok(Braid::Asmi),
            "asmirs" => Ok(Braid::Asmirs),
            _ => Err(format!("unknown braid `{s}` (expected none, as, asmi or asmirs)")),
        }
    }
}

impl fmt::Display for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Braid::None => "none",
            Braid::As => "as",
            Braid::Asmi => "asmi",
            Braid::Asmirs => "asmirs",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub braid: Braid,
    pub trace: TraceMode,
    pub max_depth: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            braid: Braid::None,
            trace: TraceMode::Off,
            max_depth: DEFAULT_MAX_DEPTH,
            seed: 0,
        }
    }
}

impl Options {
    pub fn braid(braid: Braid) -> Self {
        Options {
            braid,
            ..Options::default()
        }
    }
}

pub struct Session {
    interp: Interp,
    braid: Braid,
}

impl Session {
    pub fn new(opts: Options) -> Result<Session, Error> {
        let s = Session {
            interp: Interp::new(),
            braid: opts.braid,
        };
        s.interp.set_max_depth(opts.max_depth);
        s.interp.set_seed(opts.seed);
        match opts.braid {
            Braid::None => {}
            Braid::As => {
                s.load(as_braid::PRELUDE)?;
                as_braid::bootstrap(&s.interp)?;
            }
            Braid::Asmi => {
                s.load(asmi_braid::PRELUDE)?;
                asmi_braid::bootstrap(&s.interp)?;
                s.load(asmi_braid::EMULATION)?;
            }
            Braid::Asmirs => {
                s.load(asmirs_braid::PRELUDE)?;
                asmirs_braid::bootstrap(&s.interp)?;
                s.load(asmirs_braid::STRATEGY)?;
            }
        }
        s.interp.set_trace(opts.trace);
        Ok(s)
    }

    /// A session with the given braid and default options.
    pub fn with_braid(braid: Braid) -> Result<Session, Error> {
        Session::new(Options::braid(braid))
    }

    pub fn interp(&self) -> &Interp {
        &self.interp
    }

    pub fn braid(&self) -> Braid {
        self.braid
    }

    /// Parses and desugars a whole program without running it.
    pub fn compile(src: &str) -> Result<Vec<KernelItem>, Error> {
        let prog = syntax::parse_program(src)?;
        Ok(desugar::desugar_program(&prog)?)
    }

    /// Runs a program, handing each top-level expression's value to `out`
    /// as soon as it is computed. Nothing runs if the program fails to parse.
    pub fn run_with(&self, src: &str, mut out: impl FnMut(&Value)) -> Result<(), Error> {
        for item in Session::compile(src)? {
            if let Some(v) = self.interp.exec(&item)? {
                out(&v);
            }
        }
        Ok(())
    }

    /// Runs a program and returns the values of its top-level expressions.
    pub fn load(&self, src: &str) -> Result<Vec<Value>, Error> {
        let mut vals = Vec::new();
        self.run_with(src, |v| vals.push(v.clone()))?;
        Ok(vals)
    }

    /// Runs a program and returns its printed output, one line per value.
    pub fn run(&self, src: &str) -> Result<String, Error> {
        let mut text = String::new();
        self.run_with(src, |v| {
            text.push_str(&print::show(&self.interp, v));
            text.push('\n');
        })?;
        Ok(text)
    }

    /// Evaluates one expression.
    pub fn eval(&self, src: &str) -> Result<Value, Error> {
        let e = syntax::parse_expr(src)?;
        let k = desugar::desugar(&e)?;
        Ok(self.interp.eval_top(&k)?)
    }

    pub fn show(&self, v: &Value) -> String {
        print::show(&self.interp, v)
    }

    /// The value of a top-level name.
    pub fn global(&self, name: &str) -> Option<Value> {
        self.interp.global(name)
    }
}
