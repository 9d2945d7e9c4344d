use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::report::{hit_ratio, AppHits, HitMiss, MetricsReport};
use super::{ExperimentConfig, ExperimentError, Scheme};
use crate::engine::{EventQueue, RngStream, SimTime};
use crate::fusion::{
    allocate, degree_weights, proposed_weights, uniform_weights, AllocationPlan, Fallback,
    FeatureMatrix, PrincipalComponents, WeightVector,
};
use crate::metrics::{collect_features, RouterFeatureRecord, RouterSampler};
use crate::ndn::{
    CatalogModel, Consumer, ContentName, DataAction, DataChunk, Interest, InterestAction,
    InterestId, InterestOutcome, InterestTotals, Producer, RouterNode, APPLICATIONS,
    INTEREST_SIZE_BYTES,
};
use crate::numeric::CompensatedSum;
use crate::topology::{
    betweenness, degree_centrality, next_hops, CentralityVector, NodeId, Topology,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Phase {
    Full,
    WarmupOnly,
}

/// Why a node emitted a Data packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataCause {
    CsHit,
    Pit,
    Producer,
}

/// One observable protocol step, recorded when tracing is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceRecord {
    InterestSent {
        at: SimTime,
        from: NodeId,
        to: NodeId,
        name: ContentName,
    },
    DataSent {
        at: SimTime,
        from: NodeId,
        to: NodeId,
        name: ContentName,
        cause: DataCause,
    },
    PitCreated {
        at: SimTime,
        router: NodeId,
        name: ContentName,
    },
    PitConsumed {
        at: SimTime,
        router: NodeId,
        name: ContentName,
        expired: bool,
    },
}

enum Event {
    ConsumerTick(usize),
    Interest {
        to: NodeId,
        from: NodeId,
        interest: Interest,
    },
    Data {
        to: NodeId,
        data: DataChunk,
    },
    InterestTimeout {
        consumer: usize,
        name: ContentName,
        id: InterestId,
    },
    PitExpiry {
        router: usize,
        name: ContentName,
        created_at: SimTime,
    },
    MetricSample,
    Reallocate,
    OccupancySample,
    BucketEnd(usize),
}

#[derive(Debug, Clone, Copy)]
enum Role {
    Router(usize),
    Consumer(usize),
    Producer(usize),
}

#[derive(Debug, Clone, Copy)]
struct LinkTiming {
    interest: SimTime,
    data: SimTime,
}

pub(super) struct Network<'a> {
    config: &'a ExperimentConfig,
    seed: u64,
    queue: EventQueue<Event>,
    roles: Vec<Role>,
    router_ids: Vec<NodeId>,
    routers: Vec<RouterNode>,
    consumers: Vec<Consumer>,
    producers: Vec<Producer>,
    app_producer: Vec<NodeId>,
    catalog: CatalogModel,
    links: BTreeMap<(NodeId, NodeId), LinkTiming>,
    bc: CentralityVector,
    degree: CentralityVector,
    samplers: Vec<RouterSampler>,
    epoch: usize,
    next_interest: u64,
    realloc_at: SimTime,
    end: SimTime,
    pit_lifetime: SimTime,
    sample_interval: SimTime,
    error: Option<ExperimentError>,

    buckets: Vec<(SimTime, SimTime)>,
    router_snap: Vec<HitMiss>,
    producer_snap: Vec<HitMiss>,
    router_counts: Vec<Vec<HitMiss>>,
    producer_counts: Vec<Vec<HitMiss>>,
    rtt: Vec<(CompensatedSum, u64)>,
    pit: Vec<(CompensatedSum, u64)>,
    pit_histogram: Vec<u64>,
    app_counts: BTreeMap<(NodeId, u8), HitMiss>,

    allocation: AllocationPlan,
    weights: WeightVector,
    features: Vec<RouterFeatureRecord>,
    components: Option<PrincipalComponents>,
    fallback: Option<Fallback>,
    metric_samples: u64,
    fusion_calls: u64,
    trace: Option<Vec<TraceRecord>>,
}

impl<'a> Network<'a> {
    pub(super) fn new(
        topology: &Topology,
        config: &'a ExperimentConfig,
        seed: u64,
    ) -> Result<Self, ExperimentError> {
        config.validate()?;
        let router_ids = topology.routers();
        let consumer_ids = topology.consumers();
        let producer_ids = topology.producers();
        let p = producer_ids.len();
        if p == 0 || APPLICATIONS as usize % p != 0 {
            return Err(ExperimentError::Topology(
                "producer count must divide the number of applications",
            ));
        }
        if config.total_router_cache_chunks < router_ids.len() {
            return Err(ExperimentError::InvalidConfig(
                "total_router_cache_chunks must give every router at least one chunk",
            ));
        }

        let catalog = CatalogModel::new(
            config.q,
            config.s,
            config.files_per_application(),
            config.chunks_per_file,
        )?;

        let mut roles = vec![Role::Router(0); topology.node_count()];
        for (i, &r) in router_ids.iter().enumerate() {
            roles[r.index()] = Role::Router(i);
        }
        for (i, &c) in consumer_ids.iter().enumerate() {
            roles[c.index()] = Role::Consumer(i);
        }
        for (i, &n) in producer_ids.iter().enumerate() {
            roles[n.index()] = Role::Producer(i);
        }

        // application a is served by producer (a - 1) mod p, producers in id order
        let app_producer: Vec<NodeId> = (0..APPLICATIONS as usize)
            .map(|a| producer_ids[a % p])
            .collect();
        let producers = producer_ids
            .iter()
            .enumerate()
            .map(|(k, &id)| {
                let apps = (1..=APPLICATIONS).filter(|a| (*a as usize - 1) % p == k).collect();
                Producer::serving(id, apps, config.producer_cs_chunks).with_chunk_size(config.chunk_size)
            })
            .collect();

        let weights = uniform_weights(&router_ids);
        let allocation = allocate(&weights, config.total_router_cache_chunks)?;
        let table = next_hops(topology);
        let routers: Vec<RouterNode> = router_ids
            .iter()
            .zip(&allocation.capacities)
            .map(|(&r, &cap)| {
                let fib = producer_ids
                    .iter()
                    .filter_map(|&prod| table.get(r, prod).map(|hop| (prod, hop)))
                    .collect();
                RouterNode::new(r, cap, fib).with_chunk_size(config.chunk_size)
            })
            .collect();

        let consumers = consumer_ids
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let router = topology.attachment(c).expect("validated leaf");
                let rng = RngStream::new(seed, i as u64 + 1);
                Consumer::new(c, router, rng, config.interest_rate_hz)
            })
            .collect();

        let mut links = BTreeMap::new();
        for l in topology.links() {
            let transfer = |bytes: u32| {
                SimTime::from_secs_f64(bytes as f64 * 8.0 / l.bandwidth_bps + l.delay_s)
            };
            let timing = LinkTiming {
                interest: transfer(INTEREST_SIZE_BYTES),
                data: transfer(config.chunk_size),
            };
            links.insert((l.a, l.b), timing);
            links.insert((l.b, l.a), timing);
        }

        let realloc_at = config.reallocation_time();
        let end = SimTime::from_secs_f64(config.sim_time_s);
        let bucket_ns = SimTime::from_secs_f64(config.bucket_s).as_nanos().max(1);
        let mut buckets = Vec::new();
        let mut start = realloc_at;
        while start < end {
            let stop = SimTime::from_nanos(start.as_nanos().saturating_add(bucket_ns)).min(end);
            buckets.push((start, stop));
            start = stop;
        }
        let nb = buckets.len();
        let samplers = routers.iter().map(RouterSampler::anchored).collect();

        Ok(Self {
            config,
            seed,
            queue: EventQueue::new(),
            roles,
            router_snap: vec![HitMiss::default(); router_ids.len()],
            producer_snap: vec![HitMiss::default(); p],
            router_counts: vec![Vec::new(); nb],
            producer_counts: vec![Vec::new(); nb],
            rtt: vec![(CompensatedSum::new(), 0); nb],
            pit: vec![(CompensatedSum::new(), 0); nb],
            pit_histogram: Vec::new(),
            app_counts: BTreeMap::new(),
            router_ids,
            routers,
            consumers,
            producers,
            app_producer,
            catalog,
            links,
            bc: betweenness(topology),
            degree: degree_centrality(topology),
            samplers,
            epoch: 0,
            next_interest: 0,
            realloc_at,
            end,
            pit_lifetime: SimTime::from_secs_f64(config.pit_lifetime_s),
            sample_interval: SimTime::from_secs_f64(config.sample_interval_s),
            error: None,
            buckets,
            allocation,
            weights,
            features: Vec::new(),
            components: None,
            fallback: None,
            metric_samples: 0,
            fusion_calls: 0,
            trace: None,
        })
    }

    pub(super) fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub(super) fn take_trace(&mut self) -> Vec<TraceRecord> {
        self.trace.take().unwrap_or_default()
    }

    pub(super) fn run(&mut self, phase: Phase) -> Result<(), ExperimentError> {
        let mut q = core::mem::take(&mut self.queue);
        if phase == Phase::Full {
            q.schedule(self.realloc_at, Event::Reallocate);
        }
        if self.config.scheme == Scheme::Proposed && self.sample_interval < self.realloc_at {
            q.schedule(self.sample_interval, Event::MetricSample);
        }
        if self.config.interest_rate_hz > 0.0 {
            for c in 0..self.consumers.len() {
                q.schedule(SimTime::ZERO, Event::ConsumerTick(c));
            }
        }
        match phase {
            Phase::Full => {
                q.run_until(self.end, |q, ev| self.handle(q, ev));
                q.run_to_completion(|q, ev| self.handle(q, ev));
            }
            Phase::WarmupOnly => {
                let stop = SimTime::from_nanos(self.realloc_at.as_nanos() - 1);
                q.run_until(stop, |q, ev| self.handle(q, ev));
            }
        }
        self.queue = q;
        match self.error.take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    pub(super) fn features(&self) -> Vec<RouterFeatureRecord> {
        collect_features(&self.router_ids, &self.bc, &self.samplers)
    }

    fn record(&mut self, r: TraceRecord) {
        if let Some(t) = self.trace.as_mut() {
            t.push(r);
        }
    }

    fn link(&self, from: NodeId, to: NodeId) -> LinkTiming {
        *self
            .links
            .get(&(from, to))
            .expect("packets only travel along links")
    }

    fn send_interest(&mut self, q: &mut EventQueue<Event>, from: NodeId, to: NodeId, interest: Interest) {
        let at = q.now();
        self.record(TraceRecord::InterestSent {
            at,
            from,
            to,
            name: interest.name,
        });
        let delay = self.link(from, to).interest;
        q.schedule(at + delay, Event::Interest { to, from, interest });
    }

    fn send_data(
        &mut self,
        q: &mut EventQueue<Event>,
        from: NodeId,
        to: NodeId,
        data: DataChunk,
        cause: DataCause,
    ) {
        let at = q.now();
        self.record(TraceRecord::DataSent {
            at,
            from,
            to,
            name: data.name,
            cause,
        });
        let delay = self.link(from, to).data;
        q.schedule(at + delay, Event::Data { to, data });
    }

    fn drop_interest(&mut self, interest: &Interest) {
        if let Role::Consumer(c) = self.roles[interest.origin.index()] {
            self.consumers[c].resolve(&interest.name, interest.id, InterestOutcome::Dropped);
        }
    }

    fn bucket_of(&self, t: SimTime) -> Option<usize> {
        if t < self.realloc_at || t >= self.end {
            return None;
        }
        self.buckets.iter().position(|&(a, b)| t >= a && t < b)
    }

    fn handle(&mut self, q: &mut EventQueue<Event>, ev: Event) {
        let now = q.now();
        match ev {
            Event::ConsumerTick(c) => {
                let id = InterestId(self.next_interest);
                self.next_interest += 1;
                let consumer = &mut self.consumers[c];
                let (interest, gap) = consumer.tick(&self.catalog, now, id, self.epoch);
                let (cid, router) = (consumer.id, consumer.router);
                self.send_interest(q, cid, router, interest);
                q.schedule(
                    now + self.pit_lifetime,
                    Event::InterestTimeout {
                        consumer: c,
                        name: interest.name,
                        id,
                    },
                );
                if gap.is_finite() {
                    let next = now + SimTime::from_secs_f64(gap);
                    if next < self.end {
                        q.schedule(next, Event::ConsumerTick(c));
                    }
                }
            }
            Event::Interest { to, from, interest } => match self.roles[to.index()] {
                Role::Router(r) => {
                    let producer = self.app_producer[interest.name.app as usize - 1];
                    let act = self.routers[r].handle_interest(
                        &interest,
                        from,
                        Some(producer),
                        now,
                        self.pit_lifetime,
                    );
                    match act {
                        InterestAction::Satisfied { to: face, data } => {
                            self.send_data(q, to, face, data, DataCause::CsHit)
                        }
                        InterestAction::Aggregated => {}
                        InterestAction::Forwarded {
                            to: next,
                            created_at,
                            expires_at,
                        } => {
                            self.record(TraceRecord::PitCreated {
                                at: now,
                                router: to,
                                name: interest.name,
                            });
                            q.schedule(
                                expires_at,
                                Event::PitExpiry {
                                    router: r,
                                    name: interest.name,
                                    created_at,
                                },
                            );
                            self.send_interest(q, to, next, interest);
                        }
                        InterestAction::Dropped => self.drop_interest(&interest),
                    }
                }
                Role::Producer(p) => {
                    let prod = &mut self.producers[p];
                    let before = HitMiss::of(&prod.cs);
                    match prod.respond(&interest) {
                        Some(data) => {
                            if self.epoch == 1 {
                                let delta = HitMiss::of(&prod.cs).since(&before);
                                *self.app_counts.entry((to, interest.name.app)).or_default() += delta;
                            }
                            self.send_data(q, to, from, data, DataCause::Producer);
                        }
                        None => self.drop_interest(&interest),
                    }
                }
                Role::Consumer(_) => {}
            },
            Event::Data { to, data } => match self.roles[to.index()] {
                Role::Router(r) => {
                    if let DataAction::Forward { faces } = self.routers[r].handle_data(&data) {
                        self.record(TraceRecord::PitConsumed {
                            at: now,
                            router: to,
                            name: data.name,
                            expired: false,
                        });
                        for face in faces {
                            self.send_data(q, to, face, data, DataCause::Pit);
                        }
                    }
                }
                Role::Consumer(c) => {
                    let rtts = self.consumers[c].receive(&data, now);
                    if let Some(k) = self.bucket_of(now).filter(|_| self.epoch == 1) {
                        for x in rtts {
                            self.rtt[k].0.add(x);
                            self.rtt[k].1 += 1;
                        }
                    }
                }
                Role::Producer(_) => {}
            },
            Event::InterestTimeout { consumer, name, id } => {
                self.consumers[consumer].resolve(&name, id, InterestOutcome::Expired);
            }
            Event::PitExpiry {
                router,
                name,
                created_at,
            } => {
                if self.routers[router].pit.expire(&name, created_at, now).is_some() {
                    self.record(TraceRecord::PitConsumed {
                        at: now,
                        router: self.router_ids[router],
                        name,
                        expired: true,
                    });
                }
            }
            Event::MetricSample => {
                for (s, r) in self.samplers.iter_mut().zip(&self.routers) {
                    s.sample(r);
                }
                self.metric_samples += 1;
                let next = now + self.sample_interval;
                if next < self.realloc_at {
                    q.schedule(next, Event::MetricSample);
                }
            }
            Event::Reallocate => {
                if let Err(e) = self.reallocate(q) {
                    self.error = Some(e);
                }
            }
            Event::OccupancySample => {
                if let Some(k) = self.bucket_of(now) {
                    let mut total = 0usize;
                    for r in &self.routers {
                        let len = r.pit.len();
                        total += len;
                        if self.pit_histogram.len() <= len {
                            self.pit_histogram.resize(len + 1, 0);
                        }
                        self.pit_histogram[len] += 1;
                    }
                    self.pit[k].0.add(total as f64 / self.routers.len() as f64);
                    self.pit[k].1 += 1;
                }
                let next = now + self.sample_interval;
                if next < self.end {
                    q.schedule(next, Event::OccupancySample);
                }
            }
            Event::BucketEnd(k) => {
                let routers: Vec<HitMiss> = self.routers.iter().map(|r| HitMiss::of(&r.cs)).collect();
                let producers: Vec<HitMiss> =
                    self.producers.iter().map(|p| HitMiss::of(&p.cs)).collect();
                self.router_counts[k] = routers
                    .iter()
                    .zip(&self.router_snap)
                    .map(|(now, then)| now.since(then))
                    .collect();
                self.producer_counts[k] = producers
                    .iter()
                    .zip(&self.producer_snap)
                    .map(|(now, then)| now.since(then))
                    .collect();
                self.router_snap = routers;
                self.producer_snap = producers;
            }
        }
    }

    fn reallocate(&mut self, q: &mut EventQueue<Event>) -> Result<(), ExperimentError> {
        let weights = match self.config.scheme {
            Scheme::Uniform => uniform_weights(&self.router_ids),
            Scheme::Degree => degree_weights(&self.router_ids, &self.degree)?,
            Scheme::Proposed => {
                self.features = self.features();
                let matrix = FeatureMatrix::from_records(&self.features);
                let outcome = proposed_weights(&matrix, self.config.normalization)?;
                self.fusion_calls += 1;
                self.components = Some(outcome.components);
                self.fallback = outcome.fallback;
                outcome.weights
            }
        };
        let plan = allocate(&weights, self.config.total_router_cache_chunks)?;
        for (r, &cap) in self.routers.iter_mut().zip(&plan.capacities) {
            r.cs.resize(cap);
            r.cs.reset_counters();
        }
        for p in &mut self.producers {
            p.cs.reset_counters();
        }
        self.weights = weights;
        self.allocation = plan;
        self.epoch = 1;

        let now = q.now();
        if now < self.end {
            q.schedule(now, Event::OccupancySample);
        }
        for (k, &(_, stop)) in self.buckets.iter().enumerate() {
            q.schedule(stop, Event::BucketEnd(k));
        }
        Ok(())
    }

    pub(super) fn into_report(self) -> MetricsReport {
        let pooled = |counts: &Vec<Vec<HitMiss>>| -> Vec<f64> {
            counts.iter().map(|row| HitMiss::pooled(row).ratio()).collect()
        };
        let mean_of = |acc: &[(CompensatedSum, u64)]| -> Vec<f64> {
            acc.iter()
                .map(|(s, n)| if *n == 0 { 0.0 } else { s.value() / *n as f64 })
                .collect()
        };
        let overall = |acc: &[(CompensatedSum, u64)]| -> f64 {
            let mut s = CompensatedSum::new();
            let mut n = 0;
            for (x, k) in acc {
                s.add(x.value());
                n += k;
            }
            if n == 0 { 0.0 } else { s.value() / n as f64 }
        };

        let mut totals = InterestTotals::default();
        let mut warmup_totals = InterestTotals::default();
        for c in &self.consumers {
            warmup_totals.merge(&c.totals(0));
            totals.merge(&c.totals(1));
        }
        let router_all = HitMiss::pooled(&self.router_counts.concat());
        let producer_all = HitMiss::pooled(&self.producer_counts.concat());
        let mut per_app_hits = Vec::new();
        for p in &self.producers {
            for &app in p.apps() {
                let hm = self.app_counts.get(&(p.id, app)).copied().unwrap_or_default();
                per_app_hits.push(AppHits {
                    producer: p.id,
                    app,
                    hits: hm.hits,
                    misses: hm.misses,
                });
            }
        }

        MetricsReport {
            scheme: self.config.scheme,
            seed: self.seed,
            bucket_starts_s: self.buckets.iter().map(|(a, _)| a.as_secs_f64()).collect(),
            router_hit_ratio: pooled(&self.router_counts),
            producer_hit_ratio: pooled(&self.producer_counts),
            rtt_mean_s: mean_of(&self.rtt),
            pit_occupancy: mean_of(&self.pit),
            router_counts: self.router_counts.clone(),
            producer_counts: self.producer_counts.clone(),
            per_app_hits,
            cumulative_router_hit_ratio: hit_ratio(router_all.hits, router_all.misses),
            cumulative_producer_hit_ratio: hit_ratio(producer_all.hits, producer_all.misses),
            mean_rtt_s: overall(&self.rtt),
            mean_pit_occupancy: overall(&self.pit),
            pit_histogram: self.pit_histogram,
            totals,
            warmup_totals,
            allocation: self.allocation,
            weights: self.weights,
            features: self.features,
            components: self.components,
            fallback: self.fallback,
            metric_samples: self.metric_samples,
            fusion_calls: self.fusion_calls,
            router_drops: self.routers.iter().map(RouterNode::drops).sum(),
            producer_drops: self.producers.iter().map(Producer::drops).sum(),
            unsolicited: self.routers.iter().map(RouterNode::unsolicited).sum(),
        }
    }
}
