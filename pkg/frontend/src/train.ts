/**
 * Example training run against a spawned railmarket server: a random warmup
 * followed by independent epsilon-greedy Q-learners, one per operator, over
 * the discrete action space.
 *
 *   npm run build && node dist/train.js
 */

import { pathToFileURL } from "node:url";

import { EnvClient } from "./client.js";
import { IndependentQLearner, seededRandom } from "./learner.js";
import type { JointAction, Observation } from "./protocol.js";

export interface TrainOptions {
  scenario?: string;
  python?: string;
  warmupEpisodes?: number;
  trainEpisodes?: number;
  evalEpisodes?: number;
  seed?: number;
}

export interface TrainSummary {
  scenario: string;
  agentIds: string[];
  episodes: number;
  warmupMeanProfit: number;
  trainedMeanProfit: number;
}

type Learners = Record<string, IndependentQLearner>;

function randomJointAction(
  client: EnvClient,
  random: () => number,
): JointAction {
  const actions: JointAction = {};
  for (const agent of client.agentIds) {
    const space = client.spaces[agent].action;
    actions[agent] = Array.from({ length: space.dimension }, () =>
      Math.floor(random() * (space.levels ?? 11)),
    );
  }
  return actions;
}

async function runEpisode(
  client: EnvClient,
  seed: number | null,
  actFn: (obs: Record<string, Observation>) => JointAction,
  learners: Learners | null,
): Promise<number> {
  let observations = await client.reset(seed);
  let total = 0;
  for (;;) {
    const actions = actFn(observations);
    const outcome = await client.step(actions);
    if (learners) {
      for (const agent of client.agentIds) {
        learners[agent].update(
          observations[agent],
          actions[agent],
          outcome.rewards[agent],
          outcome.observations[agent],
          outcome.terminal,
        );
      }
    }
    for (const agent of client.agentIds) {
      total += outcome.rewards[agent];
    }
    observations = outcome.observations;
    if (outcome.terminal) {
      return total;
    }
  }
}

export async function trainOnce(options: TrainOptions = {}): Promise<TrainSummary> {
  const scenario = options.scenario ?? "business";
  const warmup = options.warmupEpisodes ?? 20;
  const episodes = options.trainEpisodes ?? 150;
  const evalEpisodes = options.evalEpisodes ?? 30;
  const seed = options.seed ?? 0;

  const client = await EnvClient.spawn({
    command: options.python ?? "python3",
    args: ["-m", "railmarket", "serve", "--stdio", "--scenario", scenario, "--discrete"],
  });
  try {
    const random = seededRandom(seed + 1);
    const learners: Learners = {};
    for (const agent of client.agentIds) {
      learners[agent] = new IndependentQLearner(
        client.spaces[agent].action,
        seededRandom(seed + 100 + client.agentIds.indexOf(agent)),
        { epsilon: 1.0 },
      );
    }

    // Random warmup: diversify the visited price states and set a baseline.
    let warmupTotal = 0;
    for (let episode = 0; episode < warmup; episode++) {
      warmupTotal += await runEpisode(
        client,
        episode === 0 ? seed : null,
        () => randomJointAction(client, random),
        learners,
      );
    }

    // Epsilon-greedy training with a linear decay.
    for (let episode = 0; episode < episodes; episode++) {
      const epsilon = Math.max(0.05, 1 - episode / (0.8 * episodes));
      for (const learner of Object.values(learners)) {
        learner.epsilon = epsilon;
      }
      await runEpisode(
        client,
        null,
        (obs) =>
          Object.fromEntries(
            client.agentIds.map((agent) => [agent, learners[agent].act(obs[agent])]),
          ),
        learners,
      );
    }

    // Greedy evaluation on fresh seeds.
    for (const learner of Object.values(learners)) {
      learner.epsilon = 0;
    }
    let evalTotal = 0;
    for (let episode = 0; episode < evalEpisodes; episode++) {
      evalTotal += await runEpisode(
        client,
        1_000_000 + seed + episode,
        (obs) =>
          Object.fromEntries(
            client.agentIds.map((agent) => [agent, learners[agent].act(obs[agent])]),
          ),
        null,
      );
    }

    return {
      scenario,
      agentIds: client.agentIds,
      episodes: warmup + episodes + evalEpisodes,
      warmupMeanProfit: warmupTotal / warmup,
      trainedMeanProfit: evalTotal / evalEpisodes,
    };
  } finally {
    await client.close();
  }
}

const isMain =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;

if (isMain) {
  trainOnce()
    .then((summary) => {
      console.log(`scenario: ${summary.scenario} (${summary.agentIds.length} agents)`);
      console.log(`episodes driven: ${summary.episodes}`);
      console.log(`random warmup mean system profit: ${summary.warmupMeanProfit.toFixed(2)}`);
      console.log(`greedy eval mean system profit:   ${summary.trainedMeanProfit.toFixed(2)}`);
    })
    .catch((err) => {
      console.error(err);
      process.exitCode = 1;
    });
}
