//! Regenerates the CSV fixtures under `fixtures/`.
//!
//! ```text
//! cargo run -p fdglm-cli --example make_fixtures
//! ```

use std::fmt::Write as _;
use std::path::Path;

use fdglm::lab::replication_rng;
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

/// True coefficients of the COVID-layout fixture: intercept, Lat, Long_.
pub const COVID_BETA: [f64; 3] = [10.0, 0.02, -0.03];
/// True coefficients of the 200-row Poisson fixture: intercept, x1, x2.
pub const POISSON_BETA: [f64; 3] = [1.0, 0.5, -0.25];
const SEED: u64 = 20_200_501;

// Approximate geographic centres, JHU US daily-report row order.
const REGIONS: [(&str, f64, f64); 58] = [
    ("Alabama", 32.3182, -86.9023),
    ("Alaska", 61.3707, -152.4044),
    ("American Samoa", -14.2710, -170.1320),
    ("Arizona", 33.7298, -111.4312),
    ("Arkansas", 34.9697, -92.3731),
    ("California", 36.1162, -119.6816),
    ("Colorado", 39.0598, -105.3111),
    ("Connecticut", 41.5978, -72.7554),
    ("Delaware", 39.3185, -75.5071),
    ("Diamond Princess", 38.2721, -121.9399),
    ("District of Columbia", 38.8974, -77.0268),
    ("Florida", 27.7663, -81.6868),
    ("Georgia", 33.0406, -83.6431),
    ("Grand Princess", 37.8044, -122.2712),
    ("Guam", 13.4443, 144.7937),
    ("Hawaii", 21.0943, -157.4983),
    ("Idaho", 44.2405, -114.4788),
    ("Illinois", 40.3495, -88.9861),
    ("Indiana", 39.8494, -86.2583),
    ("Iowa", 42.0115, -93.2105),
    ("Kansas", 38.5266, -96.7265),
    ("Kentucky", 37.6681, -84.6701),
    ("Louisiana", 31.1695, -91.8678),
    ("Maine", 44.6939, -69.3819),
    ("Maryland", 39.0639, -76.8021),
    ("Massachusetts", 42.2302, -71.5301),
    ("Michigan", 43.3266, -84.5361),
    ("Minnesota", 45.6945, -93.9002),
    ("Mississippi", 32.7416, -89.6787),
    ("Missouri", 38.4561, -92.2884),
    ("Montana", 46.9219, -110.4544),
    ("Nebraska", 41.1254, -98.2681),
    ("Nevada", 38.3135, -117.0554),
    ("New Hampshire", 43.4525, -71.5639),
    ("New Jersey", 40.2989, -74.5210),
    ("New Mexico", 34.8405, -106.2485),
    ("New York", 42.1657, -74.9481),
    ("North Carolina", 35.6301, -79.8064),
    ("North Dakota", 47.5289, -99.7840),
    ("Northern Mariana Islands", 15.0979, 145.6739),
    ("Ohio", 40.3888, -82.7649),
    ("Oklahoma", 35.5653, -96.9289),
    ("Oregon", 44.5720, -122.0709),
    ("Pennsylvania", 40.5908, -77.2098),
    ("Puerto Rico", 18.2208, -66.5901),
    ("Rhode Island", 41.6809, -71.5118),
    ("South Carolina", 33.8569, -80.9450),
    ("South Dakota", 44.2998, -99.4388),
    ("Tennessee", 35.7478, -86.6923),
    ("Texas", 31.0545, -97.5635),
    ("Utah", 40.1500, -111.8624),
    ("Vermont", 44.0459, -72.7107),
    ("Virgin Islands", 18.3358, -64.8963),
    ("Virginia", 37.7693, -78.1700),
    ("Washington", 47.4009, -121.4905),
    ("West Virginia", 38.4912, -80.9545),
    ("Wisconsin", 44.2685, -89.6165),
    ("Wyoming", 42.7560, -107.3025),
];

fn poisson_draw(rng: &mut impl Rng, mean: f64) -> u64 {
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}

fn covid(dir: &Path) {
    let mut rng = replication_rng(SEED, 0);
    let mut full = String::from("Province_State,Country_Region,Lat,Long_,Confirmed\n");
    let mut gaps = full.clone();
    for (name, lat, long) in REGIONS {
        let eta = COVID_BETA[0] + COVID_BETA[1] * lat + COVID_BETA[2] * long;
        let y = poisson_draw(&mut rng, eta.exp());
        let _ = writeln!(full, "{name},US,{lat},{long},{y}");
        if name.ends_with("Princess") {
            let _ = writeln!(gaps, "{name},US,,,{y}");
        } else {
            let _ = writeln!(gaps, "{name},US,{lat},{long},{y}");
        }
    }
    std::fs::write(dir.join("covid_synthetic.csv"), full).unwrap();
    std::fs::write(dir.join("covid_with_gaps.csv"), gaps).unwrap();
}

fn poisson_200(dir: &Path) {
    let mut rng = replication_rng(SEED, 1);
    let mut out = String::from("y,x1,x2\n");
    for _ in 0..200 {
        let x1: f64 = rng.random_range(-1.0..1.0);
        let x2: f64 = rng.sample(StandardNormal);
        let (x1, x2) = ((x1 * 1e4).round() / 1e4, (x2 * 1e4).round() / 1e4);
        let eta = POISSON_BETA[0] + POISSON_BETA[1] * x1 + POISSON_BETA[2] * x2;
        let _ = writeln!(out, "{},{x1},{x2}", poisson_draw(&mut rng, eta.exp()));
    }
    std::fs::write(dir.join("poisson_200.csv"), out).unwrap();
}

fn small(dir: &Path) {
    let files = [
        ("intercept_only.csv", "y\n1\n2\n3\n"),
        ("intercept_n4.csv", "y\n0\n1\n2\n3\n"),
        ("rank_deficient.csv", "y,x,x_copy\n1,0.5,0.5\n0,1.0,1.0\n3,1.5,1.5\n2,2.0,2.0\n4,2.5,2.5\n"),
        ("separated.csv", "y,x\n0,-2\n0,-1.5\n0,-1\n0,-0.5\n1,0.5\n1,1\n1,1.5\n1,2\n"),
        ("malformed.csv", "Province_State,Lat,Long_,Confirmed\nAlabama,32.3,-86.9,100\nAlaska,abc,-152.4,20\n"),
    ];
    for (name, body) in files {
        std::fs::write(dir.join(name), body).unwrap();
    }
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    covid(&dir);
    poisson_200(&dir);
    small(&dir);
    println!("fixtures written to {}", dir.display());
}
