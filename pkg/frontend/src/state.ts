import type { ApiClient, AuthorRow, Candidate } from "./api.js";

export interface Session {
  token: string;
  author: AuthorRow;
}

/**
 * In-memory application state. The session token lives only here, never in
 * cookies or storage: a page refresh intentionally signs the user out,
 * mirroring the server's in-memory sessions.
 */
export class AppState {
  session: Session | null = null;
  private sequence = 0;

  get identified(): boolean {
    return this.session !== null;
  }

  signIn(token: string, author: AuthorRow): void {
    this.session = { token, author };
  }

  signOut(): void {
    this.session = null;
  }

  /** Sequence numbers drop stale responses from superseded navigations. */
  beginRequest(): number {
    return ++this.sequence;
  }

  isCurrent(sequence: number): boolean {
    return sequence === this.sequence;
  }
}

export type LoginStatus = "idle" | "pending" | "candidates" | "error";

/**
 * First-login disambiguation flow: submit a name (and optional
 * affiliation), pick the matching author record, claim it for a session.
 */
export class LoginFlow {
  status: LoginStatus = "idle";
  candidates: Candidate[] = [];
  error: string | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly state: AppState,
  ) {}

  async submit(name: string, affiliation: string | null): Promise<void> {
    this.status = "pending";
    this.error = null;
    try {
      const result = await this.api.login(name, affiliation);
      this.candidates = result.candidates;
      this.status = "candidates";
    } catch (err) {
      this.status = "error";
      this.error = err instanceof Error ? err.message : String(err);
    }
  }

  async choose(authorId: string): Promise<boolean> {
    try {
      const claimed = await this.api.claim(authorId);
      this.state.signIn(claimed.token, claimed.author);
      return true;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
      return false;
    }
  }

  /** Guest mode: close the dialog without claiming anything. */
  cancel(): void {
    this.status = "idle";
    this.candidates = [];
    this.error = null;
  }
}
