/**
 * Line-based request/reply transports: a TCP socket or a spawned server
 * subprocess speaking the protocol on stdin/stdout.
 *
 * The protocol is strictly synchronous per session (one reply per request,
 * in order), so pending requests form a FIFO queue.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { createConnection, type Socket } from "node:net";
import type { Readable, Writable } from "node:stream";

import { ConnectionFailed } from "./errors.js";

interface Pending {
  resolve: (line: string) => void;
  reject: (err: Error) => void;
}

export class LineChannel {
  private buffer = "";
  private pending: Pending[] = [];
  private closedWith: Error | null = null;

  constructor(
    input: Readable,
    private readonly output: Writable,
    private readonly shutdown: () => void,
  ) {
    input.setEncoding("utf8");
    input.on("data", (chunk: string) => this.feed(chunk));
    input.on("end", () => this.fail(new ConnectionFailed("server closed the stream")));
    input.on("error", (err) => this.fail(new ConnectionFailed(String(err))));
  }

  request(message: object): Promise<string> {
    if (this.closedWith) {
      return Promise.reject(this.closedWith);
    }
    return new Promise<string>((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.output.write(JSON.stringify(message) + "\n");
    });
  }

  close(): void {
    if (!this.closedWith) {
      this.closedWith = new ConnectionFailed("channel closed by client");
    }
    this.shutdown();
  }

  private feed(chunk: string): void {
    this.buffer += chunk;
    let index: number;
    while ((index = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, index);
      this.buffer = this.buffer.slice(index + 1);
      const waiter = this.pending.shift();
      if (waiter) {
        waiter.resolve(line);
      }
    }
  }

  private fail(err: Error): void {
    if (this.closedWith) {
      return;
    }
    this.closedWith = err;
    for (const waiter of this.pending.splice(0)) {
      waiter.reject(err);
    }
  }
}

export function connectTcp(host: string, port: number): Promise<LineChannel> {
  return new Promise((resolve, reject) => {
    const socket: Socket = createConnection({ host, port });
    socket.once("error", (err) => reject(new ConnectionFailed(String(err))));
    socket.once("connect", () => {
      socket.removeAllListeners("error");
      resolve(new LineChannel(socket, socket, () => socket.destroy()));
    });
  });
}

export interface StdioServer {
  channel: LineChannel;
  child: ChildProcess;
}

/** Spawn a server subprocess and talk to it over stdin/stdout. */
export function spawnStdio(command: string, args: string[]): StdioServer {
  const child = spawn(command, args, { stdio: ["pipe", "pipe", "inherit"] });
  if (!child.stdout || !child.stdin) {
    throw new ConnectionFailed(`could not open pipes to ${command}`);
  }
  const channel = new LineChannel(child.stdout, child.stdin, () => child.kill());
  return { channel, child };
}
