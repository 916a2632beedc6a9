//! Problem files: a ring block, named ideals and modules, and options.
//!
//! ```text
//! # the five-generator ideal with I^2 = m^4
//! ring { vars = [x, y, z]; degrees = [1, 1, 1]; relations = []; dim = 3; }
//! ideal I = [x^2 - y^2, y^2 - z^2, x*y, x*z, y*z];
//! module M = coker [[x, y], [y, z]];
//! options { bound = 64; window = 3; seed = 0; }
//! ```

use crate::error::{Error, Result};
use crate::harness::{Fixture, FixtureModule};
use crate::module::{GradedSubmodule, ModulePresentation};
use crate::ring::{Ring, RingDescriptor};

/// vars, degrees, relations, dim
type RingBlock = (Vec<String>, Option<Vec<u32>>, Vec<String>, Option<usize>);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub bound: Option<i32>,
    pub window: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleSpec {
    /// Rows of the presentation matrix, as polynomial text.
    Coker(Vec<Vec<String>>),
    Free(usize),
}

/// A parsed problem file; polynomials are kept as text until a ring with the
/// final degree bound is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub vars: Vec<String>,
    pub degrees: Option<Vec<u32>>,
    pub relations: Vec<String>,
    pub dim: Option<usize>,
    pub ideals: Vec<(String, Vec<String>)>,
    pub modules: Vec<(String, ModuleSpec)>,
    pub options: Options,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile> {
        Parser::new(text).file()
    }

    /// Builds the ring, ideals and modules, with an optional degree bound.
    pub fn build(&self, name: &str, bound: Option<i32>) -> Result<Fixture> {
        let plain = RingDescriptor::new(
            self.vars.clone(),
            self.degrees.clone(),
            Vec::new(),
            self.vars.len(),
        )?;
        let relations = self
            .relations
            .iter()
            .map(|r| plain.parse(r))
            .collect::<Result<Vec<_>>>()?;
        let dim = self
            .dim
            .unwrap_or(self.vars.len().saturating_sub(relations.len()));
        let mut ring: Ring =
            RingDescriptor::new(self.vars.clone(), self.degrees.clone(), relations, dim)?;
        if let Some(b) = bound.or(self.options.bound) {
            ring = ring.with_degree_bound(b);
        }
        let mut ideals = Vec::new();
        for (n, gens) in &self.ideals {
            let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
            ideals.push((n.clone(), GradedSubmodule::ideal_from_text(&ring, &gens)?));
        }
        let mut modules = vec![FixtureModule {
            name: "A".into(),
            presentation: ModulePresentation::ring_itself(&ring),
            mcm: false,
        }];
        for (n, spec) in &self.modules {
            let presentation = match spec {
                ModuleSpec::Free(r) => ModulePresentation::free_of_rank(&ring, *r),
                ModuleSpec::Coker(rows) => {
                    let rows = rows
                        .iter()
                        .map(|r| r.iter().map(|p| ring.parse(p)).collect())
                        .collect::<Result<Vec<_>>>()?;
                    ModulePresentation::cokernel(&ring, rows)?
                }
            };
            modules.push(FixtureModule {
                name: n.clone(),
                presentation,
                mcm: false,
            });
        }
        Ok(Fixture {
            name: name.into(),
            ring,
            ideals,
            modules,
            note: String::new(),
        })
    }
}

struct Parser {
    /// The input with comments blanked out, so byte offsets still match.
    src: String,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let src = text
            .split_inclusive('\n')
            .map(|line| match line.find('#') {
                Some(i) => {
                    let body = line.trim_end_matches('\n');
                    let newline = &line[body.len()..];
                    format!("{}{}{newline}", &line[..i], " ".repeat(body.len() - i))
                }
                None => line.to_string(),
            })
            .collect();
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let r = self.rest();
        let len = r
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphanumeric() || c == '_' || (i > 0 && c == '-')))
            .map_or(r.len(), |(i, _)| i);
        if len == 0 || r.starts_with(|c: char| c.is_ascii_digit()) {
            return self.err("expected an identifier");
        }
        let out = r[..len].to_string();
        self.pos += len;
        Ok(out)
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<T> {
        self.skip_ws();
        let r = self.rest();
        let len = r
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
            .map_or(r.len(), |(i, _)| i);
        match r[..len].parse() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.err("expected a number"),
        }
    }

    /// Text up to the next `,` or `]` at bracket depth zero.
    fn item(&mut self) -> Result<String> {
        self.skip_ws();
        let r = self.rest();
        let mut depth = 0i32;
        for (i, c) in r.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' | ']' | ';' | '[' if depth == 0 => {
                    let text = r[..i].trim();
                    if text.is_empty() {
                        return self.err("empty list entry");
                    }
                    let out = text.to_string();
                    self.pos += i;
                    return Ok(out);
                }
                _ => {}
            }
        }
        self.err("unterminated list")
    }

    /// `[a, b, c]`, where `entry` parses one element.
    fn list<T>(&mut self, mut entry: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(entry(self)?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn file(&mut self) -> Result<ProblemFile> {
        let mut ring: Option<RingBlock> = None;
        let mut ideals: Vec<(String, Vec<String>)> = Vec::new();
        let mut modules: Vec<(String, ModuleSpec)> = Vec::new();
        let mut options = Options::default();
        while !self.at_end() {
            let start = self.pos;
            match self.ident()?.as_str() {
                "ring" => {
                    if ring.is_some() {
                        self.pos = start;
                        return self.err("a problem file has exactly one ring block");
                    }
                    ring = Some(self.ring_block()?);
                }
                "options" => options = self.options_block()?,
                "ideal" => {
                    let name = self.ident()?;
                    if ideals.iter().any(|(n, _)| *n == name) {
                        self.pos = start;
                        return self.err(format!("ideal `{name}` defined twice"));
                    }
                    self.expect('=')?;
                    let gens = self.list(|p| p.item())?;
                    self.expect(';')?;
                    ideals.push((name, gens));
                }
                "module" => {
                    let name = self.ident()?;
                    if name == "A" || modules.iter().any(|(n, _)| *n == name) {
                        self.pos = start;
                        return self.err(format!("module name `{name}` is taken"));
                    }
                    self.expect('=')?;
                    let spec = match self.ident()?.as_str() {
                        "coker" => ModuleSpec::Coker(self.list(|p| p.list(|q| q.item()))?),
                        "free" => ModuleSpec::Free(self.number()?),
                        other => return self.err(format!("unknown module form `{other}`")),
                    };
                    self.expect(';')?;
                    modules.push((name, spec));
                }
                other => {
                    self.pos = start;
                    return self.err(format!("unknown block `{other}`"));
                }
            }
        }
        let Some((vars, degrees, relations, dim)) = ring else {
            return self.err("missing ring block");
        };
        Ok(ProblemFile {
            vars,
            degrees,
            relations,
            dim,
            ideals,
            modules,
            options,
        })
    }

    #[allow(clippy::type_complexity)]
    fn ring_block(
        &mut self,
    ) -> Result<(Vec<String>, Option<Vec<u32>>, Vec<String>, Option<usize>)> {
        self.expect('{')?;
        let (mut vars, mut degrees, mut relations, mut dim) = (None, None, Vec::new(), None);
        while !self.eat('}') {
            let key = self.ident()?;
            self.expect('=')?;
            match key.as_str() {
                "vars" => vars = Some(self.list(|p| p.ident())?),
                "degrees" => degrees = Some(self.list(|p| p.number())?),
                "relations" => relations = self.list(|p| p.item())?,
                "dim" => dim = Some(self.number()?),
                other => return self.err(format!("unknown ring field `{other}`")),
            }
            self.expect(';')?;
        }
        let Some(vars) = vars else {
            return self.err("ring block needs `vars`");
        };
        Ok((vars, degrees, relations, dim))
    }

    fn options_block(&mut self) -> Result<Options> {
        self.expect('{')?;
        let mut o = Options::default();
        while !self.eat('}') {
            let key = self.ident()?;
            self.expect('=')?;
            match key.as_str() {
                "bound" => o.bound = Some(self.number()?),
                "window" => o.window = Some(self.number()?),
                "seed" => o.seed = Some(self.number()?),
                other => return self.err(format!("unknown option `{other}`")),
            }
            self.expect(';')?;
        }
        Ok(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
        # comment line
        ring { vars = [x, y, z]; degrees = [1, 1, 1]; relations = []; dim = 3; }
        ideal I = [ x^2-y^2, y^2-z^2, x*y, x*z, y*z ];
        module M = coker [[x, y],[y, z]];
        options { seed = 7; window = 4; }
    ";

    #[test]
    fn parses_blocks() {
        let p = ProblemFile::parse(SAMPLE).unwrap();
        assert_eq!(p.vars, ["x", "y", "z"]);
        assert_eq!(p.degrees, Some(vec![1, 1, 1]));
        assert_eq!(p.dim, Some(3));
        assert_eq!(p.ideals[0].1, ["x^2-y^2", "y^2-z^2", "x*y", "x*z", "y*z"]);
        assert_eq!(
            p.modules[0].1,
            ModuleSpec::Coker(vec![
                vec!["x".into(), "y".into()],
                vec!["y".into(), "z".into()]
            ])
        );
        assert_eq!(p.options.seed, Some(7));
        assert_eq!(p.options.window, Some(4));
        let f = p.build("t", Some(40)).unwrap();
        assert_eq!(f.ring.degree_bound(), 40);
        assert_eq!(f.modules.len(), 2);
    }

    #[test]
    fn reports_positions() {
        let err = ProblemFile::parse("ring { vars = [x]; }\nideal I = [x^2;").unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }), "{err}");
        let err = ProblemFile::parse("ideal I = [x];").unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }));
        let err = ProblemFile::parse("ring { vars = [x]; }\nfoo").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                pos: 21,
                msg: "unknown block `foo`".into()
            }
        );
        let p = ProblemFile::parse("ring { vars = [x]; }\nideal I = [q];").unwrap();
        assert!(matches!(
            p.build("t", None),
            Err(Error::UnknownVariable { .. })
        ));
    }
}
