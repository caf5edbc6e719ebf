package anon;

public class Outer {
    Runnable field = new Runnable() {
        public void run() {
            tick();
        }
    };

    void start() {
        Thread t = new Thread(new Runnable() {
            public void run() {
                work();
                work();
            }
        });
        t.start();
    }

    void tick() {}

    static class Holder {
        Object make() {
            return new Object() {
                public String toString() { return "h"; }
            };
        }
    }
}
