package init;

import java.util.ArrayList;
import java.util.List;

public class Config extends Base<String> implements Runnable {
    static final List<String> KEYS = new ArrayList<>();
    static Runnable hook;

    static {
        KEYS.add("a");
        hook = new Runnable() {
            public void run() {
                Runnable nested = new Runnable() {
                    public void run() {}
                };
                nested.run();
            }
        };
    }

    {
        KEYS.clear();
    }

    public void run() {
        hook.run();
    }

    interface Listener {
        void changed(String key);
    }

    enum Level { LOW, HIGH }
}

class Base<T> {}
