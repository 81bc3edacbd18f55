/** Client-side error types. */

/** The transport could not be established or died mid-session. */
export class ConnectionFailed extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ConnectionFailed";
  }
}

/** The server speaks a protocol version this client does not support. */
export class VersionMismatch extends Error {
  constructor(
    public readonly serverVersion: number,
    public readonly clientVersion: number,
  ) {
    super(
      `server speaks protocol v${serverVersion}, client supports v${clientVersion}`,
    );
    this.name = "VersionMismatch";
  }
}

/** The server answered a request with an error reply. */
export class ProtocolError extends Error {
  constructor(
    public readonly code: string,
    message: string,
  ) {
    super(`${code}: ${message}`);
    this.name = "ProtocolError";
  }
}
