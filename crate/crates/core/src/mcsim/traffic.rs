use rand::Rng;

/// Krauss car-following parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KraussParams {
    pub accel: f64,
    pub decel: f64,
    pub sigma: f64,
    /// Driver reaction time, s.
    pub reaction: f64,
}

impl Default for KraussParams {
    fn default() -> Self {
        KraussParams {
            accel: 5.3,
            decel: 5.3,
            sigma: 0.5,
            reaction: 0.1,
        }
    }
}

/// One single-file lane on a ring road.
///
/// Positions are lane coordinates in [0, len) along the travel direction.
/// Vehicles never overtake, so the leader of vehicle i is always i + 1
/// modulo the count and indices are stable identities.
#[derive(Debug, Clone)]
pub struct Lane {
    pub y: f64,
    /// +1 for travel towards +x, -1 towards -x.
    pub direction: f64,
    pub v_max: f64,
    pub vehicle_length: f64,
    /// Whether vehicles in this lane can occlude links.
    pub blocking: bool,
    pub s: Vec<f64>,
    pub v: Vec<f64>,
}

impl Lane {
    pub fn empty(y: f64, direction: f64, v_max: f64, vehicle_length: f64, blocking: bool) -> Self {
        Lane {
            y,
            direction,
            v_max,
            vehicle_length,
            blocking,
            s: Vec::new(),
            v: Vec::new(),
        }
    }

    /// Places `count` vehicles uniformly at random without overlap, with
    /// speeds uniform on [0, v_max].
    pub fn populate<R: Rng>(&mut self, count: usize, road_length: f64, rng: &mut R) {
        let free = road_length - count as f64 * self.vehicle_length;
        assert!(free >= 0.0, "lane cannot hold {count} vehicles");
        // Uniform spacing law: sorted uniforms on the free length, then add
        // the occupied length of the preceding vehicles.
        let mut u: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * free).collect();
        u.sort_by(f64::total_cmp);
        let offset = rng.random::<f64>() * road_length;
        self.s = u
            .iter()
            .enumerate()
            .map(|(i, &x)| wrap(x + i as f64 * self.vehicle_length + offset, road_length))
            .collect();
        self.v = (0..count).map(|_| rng.random::<f64>() * self.v_max).collect();
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Global abscissa of vehicle i.
    pub fn global_x(&self, i: usize, road_length: f64) -> f64 {
        if self.direction > 0.0 {
            self.s[i]
        } else {
            wrap(road_length - self.s[i], road_length)
        }
    }

    /// Bumper-to-bumper gap in front of vehicle i.
    pub fn gap(&self, i: usize, road_length: f64) -> f64 {
        let n = self.len();
        let raw = if n == 1 {
            road_length
        } else {
            let d = self.s[(i + 1) % n] - self.s[i];
            if d < 0.0 {
                d + road_length
            } else {
                d
            }
        };
        (raw - self.vehicle_length).max(0.0)
    }

    /// One parallel Krauss update of all vehicles over `dt`.
    pub fn step<R: Rng>(&mut self, dt: f64, params: &KraussParams, road_length: f64, rng: &mut R) {
        let n = self.len();
        if n == 0 {
            return;
        }
        let new_v: Vec<f64> = (0..n)
            .map(|i| {
                let leader = (i + 1) % n;
                let gap = self.gap(i, road_length);
                krauss_speed(self.v[i], self.v[leader], gap, self.v_max, dt, params, rng.random())
            })
            .collect();
        for (i, v) in new_v.into_iter().enumerate() {
            // Moves are far shorter than the ring, one subtraction suffices.
            let x = self.s[i] + v * dt;
            self.s[i] = if x >= road_length { x - road_length } else { x };
            self.v[i] = v;
        }
    }
}

/// Krauss speed update given own speed, leader speed, gap and a uniform draw.
pub fn krauss_speed(v: f64, v_leader: f64, gap: f64, v_max: f64, dt: f64, p: &KraussParams, uniform: f64) -> f64 {
    let tau = p.reaction;
    let v_bar = 0.5 * (v + v_leader);
    let v_safe = v_leader + (gap - v_leader * tau) / (v_bar / p.decel + tau);
    let v_des = v_max.min(v + p.accel * dt).min(v_safe);
    let v_new = (v_des - p.sigma * p.accel * dt * uniform).max(0.0);
    v_new.min(gap / dt)
}

/// Multi-lane ring road traffic with a tagged user vehicle.
#[derive(Debug, Clone)]
pub struct Traffic {
    pub road_length: f64,
    pub lanes: Vec<Lane>,
    pub user_lane: usize,
    pub user_index: usize,
    pub params: KraussParams,
}

impl Traffic {
    pub fn step<R: Rng>(&mut self, dt: f64, rng: &mut R) {
        for lane in &mut self.lanes {
            lane.step(dt, &self.params, self.road_length, rng);
        }
    }

    pub fn user_x(&self) -> f64 {
        self.lanes[self.user_lane].global_x(self.user_index, self.road_length)
    }

    pub fn user_speed(&self) -> f64 {
        self.lanes[self.user_lane].v[self.user_index]
    }
}

fn wrap(x: f64, len: f64) -> f64 {
    let r = x.rem_euclid(len);
    if r >= len {
        0.0
    } else {
        r
    }
}
