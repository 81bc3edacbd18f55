/**
 * A desk-scale epsilon-greedy tabular Q-learner over the discrete action
 * space, one instance per agent. State digest: (day, per-cell price bin
 * relative to the initial price). Joint actions enumerate the discrete
 * levels per priced cell, so keep this to one or two cells per agent.
 */

import type { ActionSpace, Observation } from "./protocol.js";

export interface LearnerOptions {
  learningRate?: number;
  gamma?: number;
  epsilon?: number;
  priceBinPercent?: number;
}

export class IndependentQLearner {
  readonly actions: number[][];
  epsilon: number;
  private readonly lr: number;
  private readonly gamma: number;
  private readonly binSteps: number;
  private readonly table = new Map<string, number[]>();
  private initialPrices: number[] | null = null;

  constructor(
    private readonly space: ActionSpace,
    private readonly random: () => number,
    options: LearnerOptions = {},
  ) {
    if (space.type !== "discrete") {
      throw new Error("IndependentQLearner needs the discrete action space");
    }
    this.lr = options.learningRate ?? 0.2;
    this.gamma = options.gamma ?? 0.95;
    this.epsilon = options.epsilon ?? 0.1;
    this.binSteps = 100 / (options.priceBinPercent ?? 10);
    this.actions = enumerateJoint(space.levels ?? 11, space.dimension);
  }

  digest(observation: Observation): string {
    const prices = this.ownPrices(observation);
    if (this.initialPrices === null || observation.day === 0) {
      this.initialPrices = prices;
    }
    const bins = prices.map((price, i) => {
      const base = this.initialPrices![i];
      if (base <= 0) {
        return 0;
      }
      const rel = Math.round((price / base - 1) * this.binSteps);
      return Math.max(-this.binSteps, Math.min(this.binSteps, rel));
    });
    return `${observation.day}|${bins.join(",")}`;
  }

  act(observation: Observation): number[] {
    const digest = this.digest(observation);
    const index =
      this.random() < this.epsilon
        ? Math.floor(this.random() * this.actions.length)
        : this.greedyIndex(digest);
    return [...this.actions[index]];
  }

  update(
    observation: Observation,
    action: number[],
    reward: number,
    nextObservation: Observation,
    terminal: boolean,
  ): void {
    const digest = this.digest(observation);
    const index = this.actions.findIndex((a) => sameAction(a, action));
    const row = this.row(digest);
    const future = terminal ? 0 : Math.max(...this.row(this.digest(nextObservation)));
    const target = reward + this.gamma * future;
    row[index] += this.lr * (target - row[index]);
  }

  greedyIndex(digest: string): number {
    const row = this.row(digest);
    let best = 0;
    for (let i = 1; i < row.length; i++) {
      if (row[i] > row[best]) {
        best = i;
      }
    }
    return best;
  }

  private row(digest: string): number[] {
    let row = this.table.get(digest);
    if (!row) {
      row = new Array(this.actions.length).fill(0);
      this.table.set(digest, row);
    }
    return row;
  }

  private ownPrices(observation: Observation): number[] {
    const byCell = new Map<string, number>();
    for (const record of observation.services) {
      for (const entry of record.prices) {
        const key = `${record.service_id}|${entry.origin}|${entry.destination}|${entry.seat_class}`;
        if (!byCell.has(key)) {
          byCell.set(key, entry.price);
        }
      }
    }
    return this.space.cells.map((cell) => {
      const key = `${cell.service_id}|${cell.origin}|${cell.destination}|${cell.seat_class}`;
      const price = byCell.get(key);
      if (price === undefined) {
        throw new Error(`observation is missing own cell ${key}`);
      }
      return price;
    });
  }
}

function enumerateJoint(levels: number, dimension: number): number[][] {
  let combos: number[][] = [[]];
  for (let d = 0; d < dimension; d++) {
    const next: number[][] = [];
    for (const combo of combos) {
      for (let level = 0; level < levels; level++) {
        next.push([...combo, level]);
      }
    }
    combos = next;
  }
  return combos;
}

function sameAction(a: number[], b: number[]): boolean {
  return a.length === b.length && a.every((v, i) => v === b[i]);
}

/** Deterministic mulberry32 PRNG so training runs are reproducible. */
export function seededRandom(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
