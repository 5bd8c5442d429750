// Session controller: owns the lifecycle (create, play, replay, restore) and
// decides what the view renders. No game logic lives here; every judgement
// about moves, advisers and averages comes from the advice service, and the
// client only refuses to send inputs the service never offered.

import { ApiError, ServiceClient, type AdviceServiceApi } from "./api.js";
import { parseDot, type DotGraph } from "./dot.js";
import { layeredLayout, type Layout } from "./layout.js";
import { formatRational, historyMoves, scriptDocument, stateAtPosition } from "./format.js";
import {
  HALTED_NO,
  OUTCOME_HARD,
  OUTCOME_NORMAL,
  OUTCOME_SOFT,
  OUTCOME_UNSAFE,
  OWNER_ADVERSARY,
  OWNER_PROTAGONIST,
  type AdviserInfoMsg,
  type BundleSummary,
  type Rational,
  type SessionSnapshot,
  type StepEventMsg,
} from "./wire.js";
import {
  buildShell,
  clearBanner,
  renderAverage,
  renderBadge,
  renderGraph,
  renderLog,
  renderMovePanel,
  renderSlider,
  renderStatus,
  renderSummary,
  showBanner,
  showError,
  type Shell,
} from "./view.js";

export const DEFAULT_SERVICE = "http://127.0.0.1:8600";

export const BANNER_HARD = "hard advice disobeyed, stopping";
export const BANNER_UNSAFE = "unsafe state reached, stopping";

interface HashHost {
  location: { hash: string; search: string };
}

type SummaryStore = Pick<Storage, "getItem" | "setItem">;

export interface AppOptions {
  /** Pause before each automatic protagonist step, for the "robot thinking"
   *  beat; tests set 0. */
  autoDelayMs?: number;
  /** Where the immutable candidate summary is cached so a refresh can show
   *  the same screen; defaults to sessionStorage when the page has one. */
  storage?: SummaryStore | null;
  /** Location holder for the #session= fragment; defaults to window. */
  host?: HashHost | null;
}

const summaryKey = (sessionId: string): string => `adviserkit-ui:summary:${sessionId}`;

function sessionFromHash(host: HashHost | null): string | null {
  const hash = host?.location.hash ?? "";
  const match = /#session=([0-9a-f]+)/.exec(hash);
  return match?.[1] ?? null;
}

const delay = (ms: number): Promise<void> => new Promise((resolve) => setTimeout(resolve, ms));

export class AppController {
  readonly shell: Shell;
  sessionId: string | null = null;
  snapshot: SessionSnapshot | null = null;
  summary: BundleSummary | null = null;
  replayPosition: number | null = null;

  private readonly client: AdviceServiceApi;
  private readonly autoDelayMs: number;
  private readonly storage: SummaryStore | null;
  private readonly host: HashHost | null;
  private graph: DotGraph | null = null;
  private layout: Layout | null = null;
  private busy = false;

  constructor(root: HTMLElement, client: AdviceServiceApi, options: AppOptions = {}) {
    this.client = client;
    this.autoDelayMs = options.autoDelayMs ?? 350;
    this.storage =
      options.storage !== undefined
        ? options.storage
        : typeof sessionStorage !== "undefined"
          ? sessionStorage
          : null;
    this.host =
      options.host !== undefined ? options.host : typeof window !== "undefined" ? window : null;

    this.shell = buildShell(root);
    this.shell.fixtureStart.addEventListener("click", () => {
      void this.startFixture(this.shell.fixtureSelect.value);
    });
    this.shell.documentStart.addEventListener("click", () => {
      void this.startDocument(this.shell.arenaInput.value);
    });
    this.shell.replaySlider.addEventListener("input", () => {
      this.setReplay(Number(this.shell.replaySlider.value));
    });
    this.shell.exportButton.addEventListener("click", () => this.downloadScript());
    this.shell.resetButton.addEventListener("click", () => {
      void this.resetSession();
    });
  }

  /** Fill the fixture picker and resume the session named in the URL hash. */
  async init(): Promise<void> {
    try {
      const fixtures = await this.client.listFixtures();
      this.shell.fixtureSelect.innerHTML = "";
      for (const name of fixtures) {
        const option = document.createElement("option");
        option.value = name;
        option.textContent = name;
        this.shell.fixtureSelect.appendChild(option);
      }
    } catch (error) {
      this.reportError(error);
      return;
    }
    const resumable = sessionFromHash(this.host);
    if (resumable !== null) await this.resume(resumable);
  }

  async startFixture(name: string): Promise<void> {
    await this.create({ fixture: name });
  }

  async startDocument(text: string): Promise<void> {
    await this.create({ document: text });
  }

  private async create(body: { fixture?: string; document?: string }): Promise<void> {
    showError(this.shell.errorLine, null);
    let created;
    try {
      created = await this.client.createSession(body);
    } catch (error) {
      this.reportError(error);
      return;
    }
    this.sessionId = created.session_id;
    this.summary = created.summary;
    this.replayPosition = null;
    this.graph = null;
    this.layout = null;
    if (this.host !== null) this.host.location.hash = `#session=${created.session_id}`;
    this.storage?.setItem(summaryKey(created.session_id), JSON.stringify(created.summary));
    clearBanner(this.shell.bannerArea);
    this.snapshot = await this.client.getState(created.session_id);
    await this.refreshGraph();
    this.render();
    await this.autoAdvance();
  }

  /** Rebuild the screen for an existing session, e.g. after a page reload. */
  async resume(sessionId: string): Promise<void> {
    showError(this.shell.errorLine, null);
    this.sessionId = sessionId;
    this.replayPosition = null;
    this.graph = null;
    this.layout = null;
    const cached = this.storage?.getItem(summaryKey(sessionId)) ?? null;
    this.summary = cached === null ? null : (JSON.parse(cached) as BundleSummary);
    try {
      this.snapshot = await this.client.getState(sessionId);
    } catch (error) {
      this.reportError(error);
      return;
    }
    await this.refreshGraph();
    const bannerEvent = this.lastBannerEvent(this.snapshot.history);
    if (bannerEvent !== undefined) this.applyBanner(bannerEvent, this.adviserBefore(bannerEvent));
    else clearBanner(this.shell.bannerArea);
    this.render();
    await this.autoAdvance();
  }

  /**
   * The event whose banner the live screen would still be showing: the most
   * recent adversary move (which set or cleared one) unless a later
   * protagonist step ended the session.
   */
  private lastBannerEvent(history: StepEventMsg[]): StepEventMsg | undefined {
    for (let i = history.length - 1; i >= 0; i -= 1) {
      const event = history[i];
      if (event === undefined) continue;
      if (event.actor === OWNER_ADVERSARY || event.outcome !== OUTCOME_NORMAL) return event;
    }
    return undefined;
  }

  /**
   * Play one adversary input. Returns the event, or null when the click is
   * ignored (busy, scrubbing, halted, or the input was never offered).
   */
  async applyMove(input: string): Promise<StepEventMsg | null> {
    const snapshot = this.snapshot;
    if (this.busy || this.replayPosition !== null || this.sessionId === null) return null;
    if (snapshot === null || snapshot.halted !== HALTED_NO) return null;
    const advice = snapshot.advice;
    if (advice === null) return null;
    const offered =
      advice.hard.includes(input) || advice.soft.includes(input) || advice.allowed.includes(input);
    if (!offered) return null;

    this.busy = true;
    const before: AdviserInfoMsg = snapshot.adviser;
    try {
      const response = await this.client.postMove(this.sessionId, input);
      this.snapshot = response.session;
      this.applyBanner(response.event, {
        index: before.index,
        lambda: before.lambda,
        nominal: before.nominal,
      });
      this.render();
      await this.refreshGraph();
      this.render();
      this.busy = false;
      await this.autoAdvance();
      return response.event;
    } catch (error) {
      this.busy = false;
      this.reportError(error);
      return null;
    }
  }

  /** Let the robot play until it is the human's turn again (or the end). */
  private async autoAdvance(): Promise<void> {
    if (this.busy || this.sessionId === null) return;
    this.busy = true;
    try {
      while (
        this.snapshot !== null &&
        this.snapshot.halted === HALTED_NO &&
        this.snapshot.owner === OWNER_PROTAGONIST
      ) {
        renderStatus(this.shell.statusLine, `robot thinking at ${this.snapshot.state}`);
        if (this.autoDelayMs > 0) await delay(this.autoDelayMs);
        const response = await this.client.autoStep(this.sessionId);
        this.snapshot = response.session;
        // A normal robot reply must not wipe the banner the human just caused.
        if (response.event.outcome !== OUTCOME_NORMAL) this.applyBanner(response.event, null);
        await this.refreshGraph();
        this.render();
      }
    } catch (error) {
      this.reportError(error);
    } finally {
      this.busy = false;
    }
  }

  /** Scrub the history; `position === history.length` returns to live play. */
  setReplay(position: number): void {
    const history = this.snapshot?.history ?? [];
    const clamped = Math.max(0, Math.min(position, history.length));
    this.replayPosition = clamped === history.length ? null : clamped;
    this.render();
  }

  async resetSession(): Promise<void> {
    if (this.sessionId === null || this.busy) return;
    this.busy = true;
    try {
      const response = await this.client.reset(this.sessionId);
      this.snapshot = response.session;
      this.replayPosition = null;
      clearBanner(this.shell.bannerArea);
      await this.refreshGraph();
      this.render();
    } catch (error) {
      this.reportError(error);
    } finally {
      this.busy = false;
    }
    await this.autoAdvance();
  }

  /** Script document for the CLI simulator, straight from the history. */
  exportScript(): string {
    return scriptDocument(historyMoves(this.snapshot?.history ?? []));
  }

  private downloadScript(): void {
    const text = this.exportScript();
    if (typeof URL === "undefined" || typeof URL.createObjectURL !== "function") return;
    const blob = new Blob([text], { type: "text/plain" });
    const anchor = document.createElement("a");
    anchor.href = URL.createObjectURL(blob);
    anchor.download = "session.script";
    anchor.click();
    URL.revokeObjectURL(anchor.href);
  }

  // ── banners ────────────────────────────────────────────────────────────

  private describeAdviser(info: {
    index: number | null;
    lambda: Rational | null;
    nominal: boolean;
  }): string {
    const name = info.index === null ? "#?" : `#${info.index}`;
    const nominal = info.nominal ? " nominal" : "";
    return `adviser ${name}${nominal} (λ ${formatRational(info.lambda)})`;
  }

  /** Adviser in force before `last`, reconstructed from the switch chain. */
  private adviserBefore(last: StepEventMsg): AdviserInfoMsg | null {
    const history = this.snapshot?.history ?? [];
    let index: number | null = this.summary?.best_index ?? null;
    for (const event of history) {
      if (event === last) break;
      if (event.new_adviser_index !== null) index = event.new_adviser_index;
    }
    if (index === null) return null;
    return {
      index,
      lambda: this.summary?.lambdas[index] ?? null,
      nominal: index === 0,
    };
  }

  private applyBanner(event: StepEventMsg, before: AdviserInfoMsg | null): void {
    const area = this.shell.bannerArea;
    if (event.outcome === OUTCOME_SOFT) {
      const from = before ?? { index: null, lambda: null, nominal: false };
      const index = event.new_adviser_index;
      let lambda: Rational | null = null;
      if (index !== null) {
        lambda = this.summary?.lambdas[index] ?? null;
        if (lambda === null && this.snapshot !== null && this.snapshot.adviser.index === index) {
          lambda = this.snapshot.adviser.lambda;
        }
      }
      const to = { index, lambda, nominal: index === 0 };
      showBanner(
        area,
        "switch",
        `soft advice violated: ${this.describeAdviser(from)} → ${this.describeAdviser(to)}`,
      );
    } else if (event.outcome === OUTCOME_HARD) {
      showBanner(area, "terminal", BANNER_HARD);
    } else if (event.outcome === OUTCOME_UNSAFE) {
      showBanner(area, "terminal", BANNER_UNSAFE);
    } else {
      clearBanner(area);
    }
  }

  // ── rendering ──────────────────────────────────────────────────────────

  private async refreshGraph(): Promise<void> {
    if (this.sessionId === null) return;
    const text = await this.client.getGraph(this.sessionId);
    this.graph = parseDot(text);
    if (this.layout === null) this.layout = layeredLayout(this.graph);
  }

  private statusText(snapshot: SessionSnapshot): string {
    if (snapshot.halted !== HALTED_NO) return `halted (${snapshot.halted}) at ${snapshot.state}`;
    if (snapshot.owner === OWNER_ADVERSARY) return `your move at ${snapshot.state}`;
    return `robot thinking at ${snapshot.state}`;
  }

  private render(): void {
    const snapshot = this.snapshot;
    if (snapshot === null) return;
    const shell = this.shell;
    shell.sessionPanel.hidden = false;

    renderStatus(shell.statusLine, this.statusText(snapshot));
    renderBadge(shell.adviserBadge, snapshot.adviser, this.summary?.best_index ?? null);
    renderAverage(shell.averageDisplay, snapshot.average, snapshot.rounds);
    renderSummary(shell.summaryPanel, this.summary);
    renderLog(shell.eventLog, snapshot.history, this.replayPosition);
    renderSlider(shell.replaySlider, shell.replayLabel, snapshot.history.length, this.replayPosition);

    const scrubbing = this.replayPosition !== null;
    const live = snapshot.halted === HALTED_NO && !scrubbing;
    const onMove = (input: string): void => {
      void this.applyMove(input);
    };

    if (this.graph !== null && this.layout !== null) {
      renderGraph(shell.graphSvg, this.graph, this.layout, {
        advice: scrubbing ? null : snapshot.advice,
        highlight: scrubbing
          ? stateAtPosition(snapshot.history, this.replayPosition ?? 0, snapshot.state)
          : snapshot.state,
        onMove: live && snapshot.owner === OWNER_ADVERSARY ? onMove : null,
      });
    }

    let note: string;
    if (scrubbing) note = "scrubbing history; slide to the end to resume play";
    else if (snapshot.halted !== HALTED_NO) note = `session halted (${snapshot.halted})`;
    else note = "robot's turn";
    renderMovePanel(shell.movePanel, scrubbing || snapshot.halted !== HALTED_NO ? null : snapshot.advice, {
      frozen: !live,
      note,
      onMove,
    });
  }

  private reportError(error: unknown): void {
    if (error instanceof ApiError) {
      const enabled =
        typeof error.detail === "object" && error.detail !== null && "enabled" in error.detail
          ? ` (enabled: ${(error.detail as { enabled: string[] }).enabled.join(", ")})`
          : "";
      showError(this.shell.errorLine, `${error.code}: ${error.message}${enabled}`);
    } else {
      showError(this.shell.errorLine, String(error));
    }
  }
}

/** Browser entry point; a no-op when the page has no mount node. */
export function bootstrap(): AppController | null {
  if (typeof document === "undefined") return null;
  const root = document.getElementById("app");
  if (root === null) return null;
  const params = new URLSearchParams(window.location.search);
  const base = params.get("service") ?? DEFAULT_SERVICE;
  const controller = new AppController(root, new ServiceClient(base));
  void controller.init();
  return controller;
}

bootstrap();
