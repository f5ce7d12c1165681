/** Viewer application: browse studies, view slices, review AI proposals. */

import { ApiClient, ApiError, type SliceMetadata } from "./api";
import { renderInfoBlocks } from "./infoblocks";
import { buildOverlay } from "./overlay";
import {
  aiRoiEnabled,
  currentSliceUid,
  decisions,
  failed,
  initialState,
  proposalsReceived,
  selectSeries,
  stepSlice,
  submitEnabled,
  submitted,
  toggleProposal,
  type ViewerState,
} from "./state";

const AUTOPLAY_MS = 200; // fixed 5 fps

export interface App {
  readonly state: ViewerState;
  readonly root: HTMLElement;
  refreshStudies(): Promise<void>;
  openSeries(studyUid: string, seriesUid: string): Promise<void>;
  runAiRoi(): Promise<void>;
  submit(): Promise<void>;
  toggle(id: string): void;
  step(delta: number): Promise<void>;
  setPlaying(on: boolean): void;
  dispose(): void;
}

export function createApp(root: HTMLElement, api: ApiClient): App {
  let state = initialState();
  let metadata: Partial<SliceMetadata> = {};
  let timer: ReturnType<typeof setInterval> | undefined;

  root.innerHTML = `
    <header class="info-blocks"></header>
    <div class="layout">
      <aside>
        <h3>Studies</h3>
        <ul class="studies"></ul>
        <h3>Series</h3>
        <ul class="series"></ul>
      </aside>
      <main>
        <div class="stage">
          <img class="slice" alt="" />
          <div class="overlay-host"></div>
        </div>
        <div class="controls">
          <button class="prev" title="previous slice">&#9664;</button>
          <button class="autoplay">autoplay</button>
          <button class="next" title="next slice">&#9654;</button>
          <span class="position"></span>
          <label>center <input class="win-center" type="number" /></label>
          <label>width <input class="win-width" type="number" /></label>
          <button class="ai-roi">AI ROI</button>
        </div>
        <div class="review">
          <span class="proposal-note"></span>
          <label>reviewer <input class="reviewer" type="text" placeholder="LAST^FIRST" /></label>
          <button class="submit">submit validated ROIs</button>
        </div>
        <div class="banner" hidden></div>
      </main>
    </div>`;

  const el = {
    header: root.querySelector<HTMLElement>(".info-blocks")!,
    studies: root.querySelector<HTMLUListElement>(".studies")!,
    series: root.querySelector<HTMLUListElement>(".series")!,
    img: root.querySelector<HTMLImageElement>(".slice")!,
    overlayHost: root.querySelector<HTMLElement>(".overlay-host")!,
    prev: root.querySelector<HTMLButtonElement>(".prev")!,
    next: root.querySelector<HTMLButtonElement>(".next")!,
    autoplay: root.querySelector<HTMLButtonElement>(".autoplay")!,
    position: root.querySelector<HTMLElement>(".position")!,
    winCenter: root.querySelector<HTMLInputElement>(".win-center")!,
    winWidth: root.querySelector<HTMLInputElement>(".win-width")!,
    aiRoi: root.querySelector<HTMLButtonElement>(".ai-roi")!,
    note: root.querySelector<HTMLElement>(".proposal-note")!,
    reviewer: root.querySelector<HTMLInputElement>(".reviewer")!,
    submit: root.querySelector<HTMLButtonElement>(".submit")!,
    banner: root.querySelector<HTMLElement>(".banner")!,
  };

  function render() {
    const slice = currentSliceUid(state);
    el.img.src = slice
      ? api.pixelsUrl(slice, state.window.center, state.window.width)
      : "";
    el.position.textContent = slice
      ? `${state.sliceIndex + 1}/${state.sliceUids.length}`
      : "";
    el.aiRoi.disabled = !aiRoiEnabled(state);
    el.submit.disabled = !submitEnabled(state) || !el.reviewer.value.trim();
    el.autoplay.classList.toggle("active", state.playing);

    el.overlayHost.innerHTML = "";
    const rows = Number(metadata.Rows ?? 0);
    const cols = Number(metadata.Columns ?? 0);
    if (slice && state.proposals.length && rows && cols) {
      el.overlayHost.appendChild(
        buildOverlay(cols, rows, state.proposals, (id) => app.toggle(id)),
      );
    }
    el.note.textContent = state.sessionId
      ? state.proposals.length
        ? `${state.proposals.length} proposal(s) from ${state.dnnUid}`
        : "no ROI proposed"
      : "";

    if (state.banner) {
      el.banner.hidden = false;
      el.banner.textContent = state.banner.text;
      el.banner.className = `banner banner-${state.banner.kind}`;
    } else {
      el.banner.hidden = true;
      el.banner.className = "banner";
    }

    const blocks = renderInfoBlocks(metadata);
    el.header.innerHTML = "";
    el.header.appendChild(blocks.left);
    el.header.appendChild(blocks.right);
  }

  function setState(next: ViewerState) {
    state = next;
    render();
  }

  async function loadMetadata() {
    const slice = currentSliceUid(state);
    if (!slice) {
      metadata = {};
      return;
    }
    try {
      metadata = await api.metadata(slice);
    } catch {
      metadata = {}; // header renders blank rather than crashing
    }
  }

  const app: App = {
    get state() {
      return state;
    },
    root,

    async refreshStudies() {
      try {
        const studies = await api.studies();
        el.studies.innerHTML = "";
        for (const study of studies) {
          const item = document.createElement("li");
          const button = document.createElement("button");
          button.textContent = study.StudyDescription
            ? `${study.StudyDescription} (${study.InstanceCount})`
            : `${study.StudyInstanceUID} (${study.InstanceCount})`;
          button.dataset.studyUid = study.StudyInstanceUID;
          button.addEventListener("click", async () => {
            const series = await api.series(study.StudyInstanceUID);
            el.series.innerHTML = "";
            for (const s of series) {
              const row = document.createElement("li");
              const open = document.createElement("button");
              open.textContent = `${s.Modality} · ${s.InstanceCount} slices`;
              open.dataset.seriesUid = s.SeriesInstanceUID;
              open.addEventListener("click", () =>
                app.openSeries(s.StudyInstanceUID, s.SeriesInstanceUID),
              );
              row.appendChild(open);
              el.series.appendChild(row);
            }
          });
          item.appendChild(button);
          el.studies.appendChild(item);
        }
      } catch (exc) {
        setState(failed(state, { kind: "error", text: describe(exc) }));
      }
    },

    async openSeries(studyUid, seriesUid) {
      try {
        const instances = await api.instances(seriesUid);
        const uids = instances.map((i) => i.SOPInstanceUID);
        setState(selectSeries(state, studyUid, seriesUid, uids));
        await loadMetadata();
        render();
      } catch (exc) {
        setState(failed(state, { kind: "error", text: describe(exc) }));
      }
    },

    async runAiRoi() {
      const slice = currentSliceUid(state);
      if (!slice || !aiRoiEnabled(state)) return;
      setState({ ...state, busy: true, banner: undefined });
      try {
        const result = await api.predict(slice);
        setState(proposalsReceived(state, result));
      } catch (exc) {
        if (exc instanceof ApiError && exc.blocksPipeline) {
          setState(
            failed(state, {
              kind: "warning",
              text: `no matching network — the work pipeline is blocked (${exc.message})`,
            }),
          );
        } else {
          setState(failed(state, { kind: "error", text: describe(exc) }));
        }
      }
    },

    async submit() {
      if (!submitEnabled(state) || !state.sessionId) return;
      const reviewer = el.reviewer.value.trim();
      if (!reviewer) return;
      setState({ ...state, busy: true });
      try {
        const result = await api.submitValidation(state.sessionId, decisions(state), reviewer);
        setState(submitted(state, result.sop_instance_uid));
      } catch (exc) {
        setState(failed(state, { kind: "error", text: describe(exc) }));
      }
    },

    toggle(id) {
      setState(toggleProposal(state, id));
    },

    async step(delta) {
      setState(stepSlice(state, delta));
      await loadMetadata();
      render();
    },

    setPlaying(on) {
      if (on === state.playing) return;
      setState({ ...state, playing: on });
      if (on) {
        timer = setInterval(() => void app.step(1), AUTOPLAY_MS);
      } else if (timer !== undefined) {
        clearInterval(timer);
        timer = undefined;
      }
    },

    dispose() {
      app.setPlaying(false);
    },
  };

  el.prev.addEventListener("click", () => void app.step(-1));
  el.next.addEventListener("click", () => void app.step(1));
  el.autoplay.addEventListener("click", () => app.setPlaying(!state.playing));
  el.aiRoi.addEventListener("click", () => void app.runAiRoi());
  el.submit.addEventListener("click", () => void app.submit());
  el.reviewer.addEventListener("input", render);
  const applyWindow = () => {
    const center = Number(el.winCenter.value);
    const width = Number(el.winWidth.value);
    state = {
      ...state,
      window:
        el.winCenter.value !== "" && el.winWidth.value !== "" && width > 0
          ? { center, width }
          : {},
    };
    render();
  };
  el.winCenter.addEventListener("change", applyWindow);
  el.winWidth.addEventListener("change", applyWindow);

  render();
  return app;
}

function describe(exc: unknown): string {
  if (exc instanceof ApiError) return `${exc.code}: ${exc.message}`;
  return exc instanceof Error ? exc.message : String(exc);
}
