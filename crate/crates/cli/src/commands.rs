//! Command dispatch. Each command yields verdicts, certificates and a
//! pass flag; `report` turns them into the emitted document.

use adic_core::adic::{complete, derived_completion, is_separated, verify_quotient_identity};
use adic_core::cech::{h0_by_kernels, local_cohomology, CechComplex, ElementSystem, FlatTestModule};
use adic_core::certifier::{certify_single, certify_theorem_1_1, verify_thm_3_1, verify_thm_3_3};
use adic_core::fpmod::{
    ext1, ext1_via_resolution, hom, hom_via_resolution, tensor, tensor_via_presentation, tor1, tor1_via_resolution,
    FPModule, Ideal,
};
use adic_core::towers::{
    check_lemma_4_1, check_lemma_4_2, limits_closed_form, ml_certificate, oracle_crosscheck, Lemma42Source,
    SymbolicLocalization, Tower,
};
use adic_core::{smith_normal_form, AlgebraError, ExactMatrix};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::instance::Instance;

pub const COMMANDS: [&str; 14] = [
    "snf",
    "invariants",
    "ext",
    "tensor",
    "complete",
    "certify",
    "certify-single",
    "lim",
    "local-cohomology",
    "check-lemma-4-1",
    "check-lemma-4-2",
    "verify-3-1",
    "verify-3-3",
    "oracle-crosscheck",
];

#[derive(Clone, Debug)]
pub struct Options {
    /// Up to two module names; the second is the source `X` where needed.
    pub modules: Vec<String>,
    pub ideal: Option<String>,
    pub system: Option<String>,
    pub depth: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { modules: Vec::new(), ideal: None, system: None, depth: 8, samples: 5, seed: 0 }
    }
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error("{0}")]
    Missing(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl CommandError {
    pub fn kind(&self) -> &'static str {
        match self {
            CommandError::UnknownCommand(_) => "unknown-command",
            CommandError::Missing(_) => "missing-entity",
            CommandError::Algebra(AlgebraError::Precondition(_)) => "precondition",
            CommandError::Algebra(_) => "algebra",
        }
    }
}

pub struct Outcome {
    /// Names of the entities the command used.
    pub inputs: Value,
    pub verdicts: Value,
    pub certificates: Value,
    pub pass: bool,
}

fn to_value<T: Serialize + ?Sized>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub fn matrix_value(a: &ExactMatrix) -> Value {
    Value::Array(
        (0..a.rows()).map(|i| Value::Array(a.row(i).iter().map(|e| Value::String(e.to_string())).collect())).collect(),
    )
}

fn module_value(m: &FPModule) -> Value {
    json!({
        "free_rank": m.free_rank(),
        "invariant_factors": to_value(&m.invariant_factors()),
        "display": m.to_string(),
    })
}

struct Ctx<'a> {
    inst: &'a Instance,
    opts: &'a Options,
}

impl<'a> Ctx<'a> {
    fn pick<T>(
        &self,
        kind: &str,
        items: &'a [(String, T)],
        wanted: Option<&str>,
    ) -> Result<(&'a str, &'a T), CommandError> {
        match wanted {
            Some(name) => items
                .iter()
                .find(|(n, _)| n == name)
                .map(|(n, x)| (n.as_str(), x))
                .ok_or_else(|| CommandError::Missing(format!("no {kind} named {name:?} in the instance"))),
            None => items
                .first()
                .map(|(n, x)| (n.as_str(), x))
                .ok_or_else(|| CommandError::Missing(format!("the instance declares no {kind}"))),
        }
    }

    fn module(&self) -> Result<(&'a str, &'a FPModule), CommandError> {
        self.pick("module", &self.inst.modules, self.opts.modules.first().map(String::as_str))
    }

    /// The second module: `--module` given twice, else the next declared
    /// one, else (when `same_ok`) the first module again.
    fn source(&self, same_ok: bool) -> Result<(&'a str, &'a FPModule), CommandError> {
        if let Some(name) = self.opts.modules.get(1) {
            return self.pick("module", &self.inst.modules, Some(name));
        }
        let first = self.module()?;
        match self.inst.modules.iter().find(|(n, _)| n != first.0) {
            Some((n, x)) => Ok((n.as_str(), x)),
            None if same_ok => Ok(first),
            None => Err(CommandError::Missing("this command needs a second module".into())),
        }
    }

    fn ideal(&self) -> Result<(&'a str, &'a Ideal), CommandError> {
        self.pick("ideal", &self.inst.ideals, self.opts.ideal.as_deref())
    }

    fn system(&self) -> Result<(&'a str, &'a ElementSystem), CommandError> {
        self.pick("system", &self.inst.systems, self.opts.system.as_deref())
    }
}

fn outcome(inputs: Value, verdicts: Value, certificates: Value, pass: bool) -> Outcome {
    Outcome { inputs, verdicts, certificates, pass }
}

pub fn run_command(cmd: &str, inst: &Instance, opts: &Options) -> Result<Outcome, CommandError> {
    let mut out = dispatch(cmd, inst, opts)?;
    // The reduced generator is recorded next to the declared list.
    let named = out.inputs.get("ideal").and_then(Value::as_str).map(str::to_string);
    if let (Some(name), Some(obj)) = (named, out.inputs.as_object_mut()) {
        if let Some((_, ideal)) = inst.ideals.iter().find(|(n, _)| *n == name) {
            obj.insert("ideal_generators".into(), to_value(&ideal.generators()));
            obj.insert("ideal_reduced".into(), json!(ideal.reduced().to_string()));
        }
    }
    Ok(out)
}

fn dispatch(cmd: &str, inst: &Instance, opts: &Options) -> Result<Outcome, CommandError> {
    let cx = Ctx { inst, opts };
    match cmd {
        "snf" => snf(&cx),
        "invariants" => invariants(&cx),
        "ext" => ext(&cx),
        "tensor" => tensor_cmd(&cx),
        "complete" => complete_cmd(&cx),
        "certify" => certify(&cx),
        "certify-single" => certify_single_cmd(&cx),
        "lim" => lim(&cx),
        "local-cohomology" => local_cohomology_cmd(&cx),
        "check-lemma-4-1" => lemma_4_1(&cx),
        "check-lemma-4-2" => lemma_4_2(&cx),
        "verify-3-1" => verify_3_1(&cx),
        "verify-3-3" => verify_3_3(&cx),
        "oracle-crosscheck" => crosscheck(&cx),
        other => Err(CommandError::UnknownCommand(other.to_string())),
    }
}

fn snf(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (name, m) = cx.module()?;
    let a = m.presentation();
    let r = smith_normal_form(a);
    let identity = (&(&r.u * a) * &r.v) == r.s;
    let unimodular = r.u.determinant()?.is_unit() && r.v.determinant()?.is_unit();
    let d = r.s.main_diagonal();
    let chain = d.windows(2).all(|w| w[1].is_divisible_by(&w[0]));
    let verdicts = json!({
        "rank": r.rank(),
        "diagonal": to_value(&d),
        "module": module_value(m),
        "identity_holds": identity,
        "unimodular": unimodular,
        "divisibility_chain": chain,
    });
    let certificates = json!({ "u": matrix_value(&r.u), "s": matrix_value(&r.s), "v": matrix_value(&r.v) });
    Ok(outcome(json!({ "module": name }), verdicts, certificates, identity && unimodular && chain))
}

fn invariants(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (name, m) = cx.module()?;
    let verdicts = json!({
        "module": module_value(m),
        "cyclic_summands": to_value(&m.cyclic_summands()),
        "is_zero": m.is_zero(),
        "is_torsion": m.is_torsion(),
        "exponent": m.exponent().to_string(),
    });
    let certificates = json!({
        "presentation": matrix_value(m.presentation()),
        "canonical_presentation": matrix_value(m.canonical().presentation()),
    });
    Ok(outcome(json!({ "module": name }), verdicts, certificates, true))
}

fn ext(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (n_name, n) = cx.module()?;
    let (x_name, x) = cx.source(true)?;
    let (h, e) = (hom(x, n)?, ext1(x, n)?);
    let (hr, er) = (hom_via_resolution(x, n)?, ext1_via_resolution(x, n)?);
    let agree = h.is_isomorphic(&hr.module) && e.is_isomorphic(&er.module);
    let verdicts = json!({
        "hom": module_value(&h),
        "ext1": module_value(&e),
        "hom_via_resolution": module_value(&hr.module),
        "ext1_via_resolution": module_value(&er.module),
        "routes_agree": agree,
    });
    let certificates = json!({
        "hom_generators": matrix_value(&hr.generators),
        "ext1_generators": matrix_value(&er.generators),
    });
    Ok(outcome(json!({ "module": n_name, "source": x_name }), verdicts, certificates, agree))
}

fn tensor_cmd(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (a_name, a) = cx.module()?;
    let (b_name, b) = cx.source(true)?;
    let (t, t1) = (tensor(a, b)?, tor1(a, b)?);
    let tp = tensor_via_presentation(a, b)?;
    let tr = tor1_via_resolution(a, b)?;
    let agree = t.is_isomorphic(&tp) && t1.is_isomorphic(&tr.module);
    let verdicts = json!({
        "tensor": module_value(&t),
        "tor1": module_value(&t1),
        "tensor_via_presentation": module_value(&tp),
        "tor1_via_resolution": module_value(&tr.module),
        "routes_agree": agree,
    });
    let certificates = json!({ "tor1_generators": matrix_value(&tr.generators) });
    Ok(outcome(json!({ "module": a_name, "source": b_name }), verdicts, certificates, agree))
}

fn complete_cmd(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (i_name, ideal) = cx.ideal()?;
    let (separated, kernel) = is_separated(m, ideal)?;
    let (completion, tau) = complete(m, ideal)?;
    let [lambda0, lambda1] = derived_completion(m, ideal)?;
    let mut identities = Vec::new();
    for alpha in 1..=cx.opts.depth as u32 {
        identities.push(json!({ "alpha": alpha, "holds": verify_quotient_identity(m, ideal, alpha)? }));
    }
    let quotients_ok = identities.iter().all(|v| v["holds"] == Value::Bool(true));
    let lambda0_matches = lambda0 == completion;
    let verdicts = json!({
        "ideal": ideal.reduced().to_string(),
        "separated": separated,
        "separation_kernel": module_value(&kernel),
        "completion": to_value(&completion),
        "complete": tau.is_iso,
        "lambda0": to_value(&lambda0),
        "lambda1": to_value(&lambda1),
        "lambda0_matches_completion": lambda0_matches,
        "lambda1_zero": lambda1.is_zero(),
    });
    let certificates = json!({ "tau": to_value(&tau), "quotient_identity": identities });
    let pass = quotients_ok && lambda0_matches && lambda1.is_zero();
    Ok(outcome(json!({ "module": m_name, "ideal": i_name }), verdicts, certificates, pass))
}

fn certify(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (i_name, ideal) = cx.ideal()?;
    let (s_name, sys) = cx.system()?;
    let r = certify_theorem_1_1(m, ideal, sys, cx.opts.samples, cx.opts.seed)?;
    let verdicts = json!({
        "ideal": r.ideal.to_string(),
        "separated": r.separated,
        "complete": r.complete,
        "consistent": r.consistent,
        "explanation": r.explanation,
        "module": module_value(&r.module),
    });
    let certificates = json!({
        "separation_kernel": module_value(&r.separation_kernel),
        "cond_ii": to_value(&r.cond_ii),
        "cond_iii": to_value(&r.cond_iii),
        "cond_iv": to_value(&r.cond_iv),
    });
    let inputs = json!({ "module": m_name, "ideal": i_name, "system": s_name, "samples": cx.opts.samples, "seed": cx.opts.seed });
    Ok(outcome(inputs, verdicts, certificates, r.consistent))
}

fn certify_single_cmd(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (s_name, sys) = cx.system()?;
    let mut reports = Vec::new();
    for x in sys.elements() {
        reports.push(certify_single(m, x)?);
    }
    let pass = reports.iter().all(|r| r.consistent);
    let verdicts = Value::Array(
        reports
            .iter()
            .map(|r| json!({ "x": r.x.to_string(), "complete_x": r.complete_x, "consistent": r.consistent }))
            .collect(),
    );
    Ok(outcome(json!({ "module": m_name, "system": s_name }), verdicts, to_value(&reports), pass))
}

fn lim(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (s_name, sys) = cx.system()?;
    let (i_name, ideal) = cx.ideal()?;
    let mut towers = vec![Tower::completion(m, ideal)?];
    for x in sys.elements() {
        towers.push(Tower::multiplication(m, x)?);
    }
    let mut verdicts = Vec::new();
    let mut certificates = Vec::new();
    let mut pass = true;
    for t in &towers {
        let closed = limits_closed_form(t)?;
        let ml = ml_certificate(t)?;
        pass &= closed.lim1.is_zero() == ml.stabilizes();
        verdicts.push(json!({ "tower": t.to_string(), "lim": to_value(&closed.lim), "lim1": to_value(&closed.lim1) }));
        certificates.push(json!({ "tower": t.to_string(), "mittag_leffler": to_value(&ml) }));
    }
    let inputs = json!({ "module": m_name, "ideal": i_name, "system": s_name });
    Ok(outcome(inputs, Value::Array(verdicts), Value::Array(certificates), pass))
}

fn local_cohomology_cmd(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (s_name, sys) = cx.system()?;
    let v = local_cohomology(m, sys)?;
    let h0 = h0_by_kernels(m, sys)?;
    let cech = CechComplex::new(sys)?;
    let (d2, koszul, exact) = (cech.d_squared_zero(), cech.matches_koszul(), cech.degreewise_exact());
    let h0_agrees = h0.is_isomorphic(&v.h0);
    let verdicts = json!({
        "cohomology": to_value(&v),
        "h0_by_kernels": module_value(&h0),
        "h0_agrees": h0_agrees,
    });
    let certificates = json!({
        "d_squared_zero": d2,
        "matches_koszul": koszul,
        "degreewise_exact": exact,
        "terms": to_value(&cech.terms),
    });
    Ok(outcome(json!({ "module": m_name, "system": s_name }), verdicts, certificates, d2 && koszul && h0_agrees))
}

fn lemma_4_1(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (s_name, sys) = cx.system()?;
    let mut reports = Vec::new();
    for x in sys.elements() {
        reports.push(check_lemma_4_1(x, m)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let verdicts = Value::Array(
        reports
            .iter()
            .map(|r| json!({ "x": r.x.to_string(), "hom": module_value(&r.hom_closed), "ext1": to_value(&r.ext1_closed), "pass": r.pass }))
            .collect(),
    );
    Ok(outcome(json!({ "module": m_name, "system": s_name }), verdicts, to_value(&reports), pass))
}

fn lemma_4_2(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (i_name, ideal) = cx.ideal()?;
    let (s_name, sys) = cx.system()?;
    let tower = Tower::completion(m, ideal)?;
    let mut sources: Vec<(String, Lemma42Source)> =
        cx.inst.modules.iter().map(|(n, x)| (format!("module {n}"), Lemma42Source::Module(x.clone()))).collect();
    for x in sys.elements() {
        sources.push((format!("R_{{{x}}}"), Lemma42Source::Localization(SymbolicLocalization::new(x))));
    }
    let mut verdicts = Vec::new();
    let mut certificates = Vec::new();
    let mut pass = true;
    for (label, s) in &sources {
        let r = check_lemma_4_2(s, &tower, cx.opts.depth)?;
        pass &= r.pass;
        let degrees: Vec<Value> = r
            .degrees
            .iter()
            .map(|d| json!({ "degree": d.degree, "direct": to_value(&d.direct), "agree": d.agree, "lim1_zero": d.lim1_zero }))
            .collect();
        verdicts.push(json!({ "source": label, "degrees": degrees, "pass": r.pass }));
        certificates.push(json!({ "source": label, "report": to_value(&r) }));
    }
    let inputs = json!({ "module": m_name, "ideal": i_name, "system": s_name });
    Ok(outcome(inputs, Value::Array(verdicts), Value::Array(certificates), pass))
}

fn verify_3_1(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (i_name, ideal) = cx.ideal()?;
    let (s_name, sys) = cx.system()?;
    let f = FlatTestModule::from_system(sys);
    let r = verify_thm_3_1(m, ideal, &f)?;
    let verdicts = json!({ "completion": to_value(&r.completion), "pass": r.pass });
    let inputs = json!({ "module": m_name, "ideal": i_name, "system": s_name });
    Ok(outcome(inputs, verdicts, json!({ "entries": to_value(&r.entries) }), r.pass))
}

fn verify_3_3(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (x_name, x) = cx.source(false)?;
    let (i_name, ideal) = cx.ideal()?;
    let r = verify_thm_3_3(x, m, ideal)?;
    let verdicts = json!({
        "hom": module_value(&r.hom_m),
        "ext1": module_value(&r.ext1_m),
        "hom_completed": module_value(&r.hom_completed),
        "ext1_completed": module_value(&r.ext1_completed),
        "kernel_piece_zero": r.kernel_piece_zero,
        "cokernel_piece_zero": r.cokernel_piece_zero,
        "pass": r.pass,
    });
    let inputs = json!({ "module": m_name, "source": x_name, "ideal": i_name });
    Ok(outcome(inputs, verdicts, json!({ "transfer": to_value(&r.transfer) }), r.pass))
}

fn crosscheck(cx: &Ctx) -> Result<Outcome, CommandError> {
    let (m_name, m) = cx.module()?;
    let (i_name, ideal) = cx.ideal()?;
    let (s_name, sys) = cx.system()?;
    let mut towers = vec![Tower::completion(m, ideal)?];
    for x in sys.elements() {
        towers.push(Tower::multiplication(m, x)?);
    }
    let mut verdicts = Vec::new();
    let mut certificates = Vec::new();
    let mut pass = true;
    for t in &towers {
        let c = oracle_crosscheck(t, cx.opts.depth)?;
        pass &= c.pass;
        verdicts.push(json!({
            "tower": c.tower,
            "lim": to_value(&c.closed.lim),
            "lim1": to_value(&c.closed.lim1),
            "oracle_stabilized": c.oracle.stabilized,
            "lim_agrees": c.lim_agrees,
            "lim1_justified": c.lim1_justified,
            "ml_consistent": c.ml_consistent,
            "pass": c.pass,
        }));
        certificates
            .push(json!({ "tower": c.tower, "oracle": to_value(&c.oracle), "mittag_leffler": to_value(&c.ml) }));
    }
    let inputs = json!({ "module": m_name, "ideal": i_name, "system": s_name });
    Ok(outcome(inputs, Value::Array(verdicts), Value::Array(certificates), pass))
}
