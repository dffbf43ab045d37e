use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cubictk_core::acceptance;
use cubictk_core::arith::{parse_rat, rat_to_string, Rat};
use cubictk_core::bernoulli::{bernoulli, bernoulli_mod, herbrand_test};
use cubictk_core::cubic::{check_cubic, kernel_annihilator_bound};
use cubictk_core::cyclotomic::{p_chi, Budget, ClassGroup, ClassGroupOptions, IdealClass};
use cubictk_core::group_algebra::{lambda_z, FiniteAbelianGroup, GCharacter, GroupRingElt, SigmaElt};
use cubictk_core::modular::{bsd_relation, lattice_class_sweep, lattice_steinitz_class};
use cubictk_core::riemann_roch::{main_theorem_idele, t_pi_general, t_pi_surface, telescope_check, BranchData};
use cubictk_core::stickelberger::{gauss_sum_check, h_minus, theta2_on_pchi, StickelbergerElt};
use cubictk_core::{Error, Result};

/// A fully resolved command with every file argument inlined.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Request {
    CheckCubic { group: Vec<u64>, n: usize, elem: Vec<(Vec<u64>, String)> },
    KernelBound { group: Vec<u64>, n: usize, assume_vandiver: bool },
    Classgroup { r: u64, invert_two: bool, bound: Option<u64> },
    Pchi { r: u64, p: u64, chi_exponent: u64 },
    Theta2 { r: u64, p: u64, apply_to: Option<String>, chi_exponent: u64 },
    Herbrand { r: u64 },
    Hminus { r: u64 },
    Gauss { p: u64, r: u64 },
    Bernoulli { k: usize, modulus: Option<u64> },
    Tpi { branch: BranchData, chi_exponent: Vec<u64> },
    MainthmIdele { branch: BranchData, squared: bool },
    Telescope { n: usize, q: u32 },
    ModularClass { p: u64, r: u64, sweep: bool },
    BsdCheck { p: u64, r: u64, sha: Vec<String>, mw: Vec<String> },
    Acceptance { only: Option<u32> },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Assumptions {
    pub vandiver: bool,
    pub h_plus_one: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub request: Request,
    pub assumptions: Assumptions,
    pub result: Value,
    /// False when the computation finished but the property it checks does not hold.
    pub passed: bool,
}

struct Outcome {
    result: Value,
    passed: bool,
    assumptions: Assumptions,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, passed: true, assumptions: Assumptions::default() }
    }

    fn check(result: Value, passed: bool) -> Self {
        Outcome { result, passed, assumptions: Assumptions::default() }
    }

    fn h_plus(mut self) -> Self {
        self.assumptions.h_plus_one = true;
        self
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn group_of(factors: &[u64]) -> Result<FiniteAbelianGroup> {
    FiniteAbelianGroup::new(factors.to_vec())
}

fn class_options(invert_two: bool, bound: Option<u64>) -> ClassGroupOptions {
    ClassGroupOptions { invert_two, bound, ..Default::default() }
}

fn class_from_strings(coords: &[String]) -> Result<IdealClass> {
    let coords = coords
        .iter()
        .map(|s| s.parse::<BigInt>().map_err(|_| Error::Input(format!("class coordinate {s:?} is not an integer"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(IdealClass { coords })
}

fn class_value(cg: &ClassGroup, c: &IdealClass) -> Value {
    json!({
        "coords": c.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "is_zero": cg.is_zero(c),
    })
}

impl Request {
    pub fn run(&self) -> Result<RunReport> {
        let out = self.execute()?;
        Ok(RunReport { request: self.clone(), assumptions: out.assumptions, result: out.result, passed: out.passed })
    }

    fn execute(&self) -> Result<Outcome> {
        match self {
            Request::CheckCubic { group, n, elem } => {
                let g = group_of(group)?;
                if !(1..=6).contains(n) {
                    return Err(Error::Input(format!("n = {n} outside 1..=6")));
                }
                let mut terms = Vec::with_capacity(elem.len());
                for (x, c) in elem {
                    if x.len() != g.rank() || x.iter().zip(g.invariant_factors()).any(|(a, d)| a >= d) {
                        return Err(Error::Input(format!("{x:?} is not an element of the group")));
                    }
                    let c: Rat = parse_rat(c).ok_or_else(|| Error::Input(format!("coefficient {c:?} is not rational")))?;
                    terms.push((x.clone(), c));
                }
                let alpha = GroupRingElt::new(&g, terms);
                if !alpha.is_unit() {
                    return Err(Error::Input("element is not a unit of Q[G]: some character value vanishes".into()));
                }
                let table = lambda_z(&SigmaElt::s_n(&g, *n), &alpha.table())?;
                let verdict = check_cubic(&table)?;
                let cubic = verdict.is_n_cubic();
                Ok(Outcome::check(json!({ "n_cubic": cubic, "verdict": to_value(&verdict) }), cubic))
            }
            Request::KernelBound { group, n, assume_vandiver } => {
                let g = group_of(group)?;
                let bound = kernel_annihilator_bound(*n, &g, *assume_vandiver)?;
                let mut out = Outcome::ok(json!({ "bound": bound.to_string() }));
                out.assumptions.vandiver = *assume_vandiver;
                Ok(out)
            }
            Request::Classgroup { r, invert_two, bound } => {
                let cg = ClassGroup::compute(*r, &class_options(*invert_two, *bound))?;
                Ok(Outcome::ok(to_value(&cg.report())).h_plus())
            }
            Request::Pchi { r, p, chi_exponent } => {
                let prime = p_chi(*r, *p, *chi_exponent)?;
                let cg = ClassGroup::compute(*r, &ClassGroupOptions::default())?;
                let class = cg.prime_class(&prime, Budget::default())?;
                Ok(Outcome::ok(json!({
                    "p": prime.p,
                    "f": prime.f,
                    "poly": prime.g,
                    "hnf": to_value(&prime.ideal())["basis"],
                    "class": class_value(&cg, &class),
                }))
                .h_plus())
            }
            Request::Theta2 { r, p, apply_to, chi_exponent } => {
                let theta = StickelbergerElt::theta2(*r, *p)?;
                let coefficients: Vec<Value> = (0..*r as i64)
                    .map(|a| json!({ "a": a, "coefficient": rat_to_string(&theta.rational_coefficient(a)) }))
                    .collect();
                let mut result = json!({ "coefficients": coefficients, "warnings": theta.warnings });
                match apply_to.as_deref() {
                    None => Ok(Outcome::ok(result)),
                    Some("pchi") => {
                        let cg = ClassGroup::compute(*r, &ClassGroupOptions::default())?;
                        let c = theta2_on_pchi(*r, *p, *chi_exponent, &cg, Budget::default())?;
                        result["applied_to_pchi"] = class_value(&cg, &c);
                        Ok(Outcome::ok(result).h_plus())
                    }
                    Some(other) => Err(Error::Input(format!("cannot apply to {other:?}"))),
                }
            }
            Request::Herbrand { r } => {
                let mut irregular = Vec::new();
                for k in (2..=r.saturating_sub(3) as usize).step_by(2) {
                    if herbrand_test(*r, k)? {
                        irregular.push(k);
                    }
                }
                if *r < 5 {
                    herbrand_test(*r, 2)?;
                }
                Ok(Outcome::ok(json!({ "r": r, "irregular_indices": irregular, "regular": irregular.is_empty() })))
            }
            Request::Hminus { r } => Ok(Outcome::ok(json!({ "r": r, "h_minus": h_minus(*r)?.to_string() }))),
            Request::Gauss { p, r } => {
                let rep = gauss_sum_check(*p, *r)?;
                let passed = rep.passed;
                Ok(Outcome::check(to_value(&rep), passed))
            }
            Request::Bernoulli { k, modulus } => {
                let mut result = json!({ "k": k, "value": rat_to_string(&bernoulli(*k)) });
                if let Some(m) = modulus {
                    result["mod"] = json!(m);
                    result["residue"] = json!(bernoulli_mod(*k, *m)?);
                }
                Ok(Outcome::ok(result))
            }
            Request::Tpi { branch, chi_exponent } => {
                branch.validate()?;
                let g = branch.group()?;
                let chi = GCharacter::new(&g, chi_exponent.clone())?;
                let t = if branch.d == 1 {
                    t_pi_surface(branch, &chi)?
                } else {
                    t_pi_general(branch, &branch.degree_table()?, &chi)?
                };
                Ok(Outcome::ok(json!({ "chi": chi_exponent, "t": rat_to_string(&t) })))
            }
            Request::MainthmIdele { branch, squared } => {
                branch.validate()?;
                Ok(Outcome::ok(to_value(&main_theorem_idele(branch, *squared)?)))
            }
            Request::Telescope { n, q } => {
                let rep = telescope_check(*n, *q)?;
                Ok(Outcome::ok(to_value(&rep)))
            }
            Request::ModularClass { p, r, sweep } => {
                let opts = ClassGroupOptions::default();
                let result = if *sweep {
                    to_value(&lattice_class_sweep(*p, *r, &opts)?)
                } else {
                    to_value(&lattice_steinitz_class(*p, *r, &opts)?)
                };
                Ok(Outcome::ok(result).h_plus())
            }
            Request::BsdCheck { p, r, sha, mw } => {
                let sha = class_from_strings(sha)?;
                let mw = class_from_strings(mw)?;
                let holds = bsd_relation(*p, *r, &sha, &mw, Budget::default())?;
                Ok(Outcome::check(json!({ "relation_holds": holds }), holds).h_plus())
            }
            Request::Acceptance { only } => {
                let results = match only {
                    Some(id) => vec![acceptance::run(*id).ok_or_else(|| Error::Input(format!("no criterion {id}")))?],
                    None => acceptance::run_all(),
                };
                for res in &results {
                    eprintln!("{}", res.line());
                }
                let passed = results.iter().all(|r| r.passed);
                let mut out = Outcome::check(to_value(&results), passed);
                out.assumptions.h_plus_one = true;
                Ok(out)
            }
        }
    }
}
