/**
 * EnvClient: the remote environment as a plain step/reset object.
 *
 * The client performs no simulation of its own; observations, rewards and
 * terminal flags are deserialised exactly as the server sent them, so a
 * remote episode reproduces an in-process one bit for bit.
 */

import type { ChildProcess } from "node:child_process";

import { ConnectionFailed, ProtocolError, VersionMismatch } from "./errors.js";
import {
  type AgentSpaces,
  type HelloReply,
  type JointAction,
  type Observation,
  type Reply,
  type ResetReply,
  type StepInfo,
  type StepReply,
  SUPPORTED_PROTOCOL_VERSION,
  isErrorReply,
} from "./protocol.js";
import { connectTcp, type LineChannel, spawnStdio } from "./transport.js";

export interface StepOutcome {
  observations: Record<string, Observation>;
  rewards: Record<string, number>;
  terminal: boolean;
  info: StepInfo;
}

export interface TcpTarget {
  host: string;
  port: number;
}

export interface StdioTarget {
  /** Command spawning a `--stdio` server, e.g. python3 -m railmarket serve ... */
  command: string;
  args: string[];
}

export class EnvClient {
  private constructor(
    private readonly channel: LineChannel,
    private readonly child: ChildProcess | null,
    public readonly scenario: string,
    public readonly agentIds: string[],
    public readonly actionMode: "continuous" | "discrete",
    public readonly horizonDays: number,
    public readonly spaces: Record<string, AgentSpaces>,
    public readonly protocolVersion: number,
  ) {}

  /** Connect to a running TCP server and complete the handshake. */
  static async connect(target: TcpTarget): Promise<EnvClient> {
    const channel = await connectTcp(target.host, target.port);
    return EnvClient.handshake(channel, null);
  }

  /** Spawn a stdio-mode server subprocess and complete the handshake. */
  static async spawn(target: StdioTarget): Promise<EnvClient> {
    const { channel, child } = spawnStdio(target.command, target.args);
    return EnvClient.handshake(channel, child);
  }

  private static async handshake(
    channel: LineChannel,
    child: ChildProcess | null,
  ): Promise<EnvClient> {
    let hello: HelloReply;
    try {
      hello = (await request(channel, { kind: "hello" })) as HelloReply;
    } catch (err) {
      channel.close();
      throw err instanceof Error ? err : new ConnectionFailed(String(err));
    }
    if (hello.protocol_version !== SUPPORTED_PROTOCOL_VERSION) {
      channel.close();
      throw new VersionMismatch(hello.protocol_version, SUPPORTED_PROTOCOL_VERSION);
    }
    return new EnvClient(
      channel,
      child,
      hello.scenario,
      hello.agent_ids,
      hello.action_mode,
      hello.horizon_days,
      hello.spaces,
      hello.protocol_version,
    );
  }

  /** Start an episode. `seed: null` continues the session's rng streams. */
  async reset(seed: number | null): Promise<Record<string, Observation>> {
    const reply = (await request(this.channel, { kind: "reset", seed })) as ResetReply;
    return reply.observations;
  }

  /** Advance one day with one action vector per agent. */
  async step(actions: JointAction): Promise<StepOutcome> {
    const reply = (await request(this.channel, { kind: "step", actions })) as StepReply;
    return {
      observations: reply.observations,
      rewards: reply.rewards,
      terminal: reply.terminal,
      info: reply.info,
    };
  }

  async close(): Promise<void> {
    try {
      await request(this.channel, { kind: "close" });
    } catch {
      // the session is going away either way
    }
    this.channel.close();
    this.child?.kill();
  }
}

async function request(channel: LineChannel, message: object): Promise<Reply> {
  const line = await channel.request(message);
  let reply: Reply;
  try {
    reply = JSON.parse(line) as Reply;
  } catch (err) {
    throw new ConnectionFailed(`unparseable reply line: ${String(err)}`);
  }
  if (isErrorReply(reply)) {
    throw new ProtocolError(reply.error.code, reply.error.message);
  }
  return reply;
}
