use ab_lab::cli;
use std::path::PathBuf;
use std::process::ExitCode;

const HELP: &str = "\
ab-lab: porous-medium pressure-Laplacian estimate laboratory

USAGE:
    ab-lab <SUBCOMMAND> [OPTIONS]

SUBCOMMANDS:
    run             run one scenario and check the requested bounds
    sweep           run the scenario across a parameter sweep
    hele-shaw       stiff-limit sweep with complementarity residuals
    verify-weights  emit weight tables and scanned constants for a law
    barenblatt      dump the self-similar reference profile
    aronson         run the cos^2 pressure blow-up reference
    report          re-render summary and plots from a run directory

COMMON OPTIONS:
    --config PATH        scenario file (run, sweep, hele-shaw, verify-weights)
    --set KEY=VALUE      override a config key (repeatable), e.g. law.gamma=4
    --out DIR            output directory (beats AB_LAB_OUTPUT and the config)

aronson OPTIONS:
    --gamma X --cells N --t-end T --cap C --out DIR

barenblatt OPTIONS:
    --gamma X --dim D --c0 C --cells N --extent L --times \"1,2,4\" --out DIR

report OPTIONS:
    --dir DIR [--tol X]

EXIT CODES:
    0  all requested bound checks passed
    1  execution error
    2  a bound check failed

The AB_LAB_OUTPUT environment variable overrides the configured output
directory when --out is not given.
";

struct Args {
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    dir: Option<PathBuf>,
    sets: Vec<(String, String)>,
    gamma: f64,
    dim: u32,
    c0: f64,
    cells: usize,
    extent: f64,
    times: Vec<f64>,
    t_end: f64,
    cap: f64,
    tol: f64,
}

impl Default for Args {
    fn default() -> Self {
        Self {
            config: None,
            out: None,
            dir: None,
            sets: Vec::new(),
            gamma: 2.0,
            dim: 1,
            c0: 1.0,
            cells: 1024,
            extent: 12.0,
            times: vec![1.0, 2.0, 4.0],
            t_end: 0.3,
            cap: 800.0,
            tol: 0.1,
        }
    }
}

fn parse_args(argv: &[String]) -> Result<Args, String> {
    let mut args = Args::default();
    let mut it = argv.iter();
    while let Some(flag) = it.next() {
        let mut value = || {
            it.next().cloned().ok_or_else(|| format!("flag {flag} needs a value"))
        };
        match flag.as_str() {
            "--config" => args.config = Some(PathBuf::from(value()?)),
            "--out" => args.out = Some(PathBuf::from(value()?)),
            "--dir" => args.dir = Some(PathBuf::from(value()?)),
            "--set" => {
                let v = value()?;
                let (k, val) = v
                    .split_once('=')
                    .ok_or_else(|| format!("--set expects KEY=VALUE, got `{v}`"))?;
                args.sets.push((k.trim().to_string(), val.trim().to_string()));
            }
            "--gamma" => args.gamma = parse_num(&value()?, flag)?,
            "--dim" => args.dim = parse_num(&value()?, flag)? as u32,
            "--c0" => args.c0 = parse_num(&value()?, flag)?,
            "--cells" => args.cells = parse_num(&value()?, flag)? as usize,
            "--extent" => args.extent = parse_num(&value()?, flag)?,
            "--t-end" => args.t_end = parse_num(&value()?, flag)?,
            "--cap" => args.cap = parse_num(&value()?, flag)?,
            "--tol" => args.tol = parse_num(&value()?, flag)?,
            "--times" => {
                args.times = value()?
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad time `{s}`")))
                    .collect::<Result<_, _>>()?;
            }
            other => return Err(format!("unknown flag `{other}`")),
        }
    }
    Ok(args)
}

fn parse_num(s: &str, flag: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("flag {flag}: bad number `{s}`"))
}

fn read_config(args: &Args) -> Result<String, String> {
    let path = args.config.as_ref().ok_or("missing --config PATH")?;
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn dispatch() -> Result<i32, String> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let Some(sub) = argv.first() else {
        print!("{HELP}");
        return Ok(cli::EXIT_RUN_ERROR);
    };
    if sub == "--help" || sub == "-h" || sub == "help" {
        print!("{HELP}");
        return Ok(cli::EXIT_OK);
    }
    let args = parse_args(&argv[1..])?;
    let as_string = |e: cli::CliError| e.to_string();
    match sub.as_str() {
        "run" => {
            let text = read_config(&args)?;
            cli::cmd_run(&text, &args.sets, args.out.as_deref()).map_err(as_string)
        }
        "sweep" => {
            let text = read_config(&args)?;
            cli::cmd_sweep(&text, &args.sets, args.out.as_deref()).map_err(as_string)
        }
        "hele-shaw" => {
            let text = read_config(&args)?;
            cli::cmd_hele_shaw(&text, &args.sets, args.out.as_deref()).map_err(as_string)
        }
        "verify-weights" => {
            let text = read_config(&args)?;
            cli::cmd_verify_weights(&text, &args.sets, args.out.as_deref()).map_err(as_string)
        }
        "barenblatt" => {
            let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            cli::cmd_barenblatt(
                args.gamma, args.dim, args.c0, &args.times, args.cells, args.extent, &out,
            )
            .map_err(as_string)
        }
        "aronson" => {
            let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            cli::cmd_aronson(args.gamma, args.cells, args.t_end, args.cap, &out).map_err(as_string)
        }
        "report" => {
            let dir = args.dir.clone().ok_or("report needs --dir DIR")?;
            cli::cmd_report(&dir, args.tol).map_err(as_string)
        }
        other => Err(format!("unknown subcommand `{other}`; see --help")),
    }
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(cli::EXIT_RUN_ERROR as u8)
        }
    }
}
