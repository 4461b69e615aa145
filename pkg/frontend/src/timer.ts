// Per-maze stopwatch. Starts exactly once when the first view of a maze
// renders, stops on the goal, and is never reused after stopping.

export class Stopwatch {
  private startedAt: number | null = null;
  private stoppedAt: number | null = null;

  constructor(private now: () => number = () => performance.now()) {}

  get running(): boolean {
    return this.startedAt !== null && this.stoppedAt === null;
  }

  get started(): boolean {
    return this.startedAt !== null;
  }

  start(): void {
    if (this.startedAt !== null) {
      throw new Error("stopwatch already started; use a fresh one per maze");
    }
    this.startedAt = this.now();
  }

  stop(): number {
    if (this.startedAt === null) throw new Error("stopwatch never started");
    if (this.stoppedAt !== null) throw new Error("stopwatch already stopped");
    this.stoppedAt = this.now();
    return this.elapsedMs();
  }

  elapsedMs(): number {
    if (this.startedAt === null) throw new Error("stopwatch never started");
    const end = this.stoppedAt ?? this.now();
    return end - this.startedAt;
  }
}
